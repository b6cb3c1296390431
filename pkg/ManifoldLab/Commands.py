""" The command line surface of ManifoldLab.

One subcommand per experiment kind, plus two that work across runs:

    manifoldlab.py generate -c samples.cfg --out runs/samples
    manifoldlab.py train-learnable -c learnable.cfg --seed 3 --out runs/learnable-3
    manifoldlab.py train-hard -c hard.cfg
    manifoldlab.py sq -c sq.cfg
    manifoldlab.py iddim -c iddim.cfg
    manifoldlab.py geometry -c geometry.cfg
    manifoldlab.py summarize --out runs/aggregate runs/learnable-1 runs/learnable-2 ...
    manifoldlab.py sweep -c hard.cfg --runs 5 --processes 5 --out runs/hard

The configuration "kind" must match the subcommand, or may be left out. The
--seed and --out options override the configuration's "seed" and "output".

A sweep derives one seed per run from --seed (or from the configuration),
or takes an explicit --seeds list, runs each in its own process with its
own output directory "seed-<seed>" under --out, and then summarizes them.

Exit status is 0 when every run finished clean, 2 when a run was flagged or
the command line or configuration was unusable.
"""

import logging
import sys
from optparse import OptionParser
from os.path import join as pathjoin, realpath
from multiprocessing import Pool

from . import __version__
from . import Config
from . import Core
from . import Outputs
from . import readConfig, runExperiment

RUN_COMMANDS = {
    'generate': 'generate',
    'train-learnable': 'learnable',
    'train-hard': 'hard',
    'sq': 'sq',
    'iddim': 'iddim',
    'geometry': 'geometry',
    }

COMMANDS = sorted(RUN_COMMANDS) + ['summarize', 'sweep']

def makeParser(command):
    """ Build the option parser for one subcommand.
    """
    if command == 'summarize':
        usage = """%prog summarize [options] <run directory>...

Aggregates summary.json metrics from several run directories, typically one
run per seed, into median, mean, min and max per metric."""

    elif command == 'sweep':
        usage = """%prog sweep [options]

Runs one configuration over several seeds in a pool of processes, one output
directory per seed, and summarizes them. Configuration and output are required."""

    else:
        usage = """%%prog %s [options]

Runs a "%s" experiment from a JSON configuration file; see `%%prog %s --help`.""" % (command, RUN_COMMANDS[command], command)

    parser = OptionParser(usage=usage, version=__version__)
    parser.set_defaults(verbosity=None, processes=1)

    if command != 'summarize':
        parser.add_option('-c', '--config', dest='config',
                          help='Path to configuration file.')

        parser.add_option('-s', '--seed', dest='seed', type='int',
                          help='Seed to use instead of the configuration "seed"; for a sweep, the seed that run seeds derive from.')

    parser.add_option('-o', '--out', dest='out',
                      help='Output directory to use instead of the configuration "output".')

    parser.add_option('-v', '--verbose', dest='verbosity', action='store_const', const=logging.INFO,
                      help='Log progress of every run.')

    parser.add_option('-q', '--quiet', dest='verbosity', action='store_const', const=logging.ERROR,
                      help='Log only errors.')

    if command == 'sweep':
        parser.add_option('--seeds', dest='seeds',
                          help='Comma-separated list of explicit run seeds.')

        parser.add_option('-n', '--runs', dest='runs', type='int',
                          help='Number of runs, with seeds derived from --seed.')

        parser.add_option('-p', '--processes', dest='processes', type='int',
                          help='Number of worker processes. Default value is 1.')

    return parser

def overrideConfig(config_dict, kind, seed=None, out=None):
    """ Return a copy of a configuration dictionary with kind, seed and output settled.
    """
    config_dict = dict(config_dict)

    if config_dict.setdefault('kind', kind) != kind:
        raise Core.KnownUnknown('Configuration is for a "%s" experiment, not "%s".' % (config_dict['kind'], kind))

    if seed is not None:
        config_dict['seed'] = seed

    if out is not None:
        config_dict['output'] = {'name': 'Disk', 'path': realpath(out)}

    return config_dict

def runCommand(kind, options):
    """ Run one experiment and return its manifest.
    """
    if not options.config:
        raise Core.KnownUnknown('Missing required configuration (--config) parameter.')

    config_dict, dirpath, config_bytes = readConfig(options.config)
    config_dict = overrideConfig(config_dict, kind, options.seed, options.out)
    config = Config.buildConfiguration(config_dict, dirpath, config_bytes)

    manifest = runExperiment(config)
    path = getattr(config.output, 'path', None)

    if path:
        print('%s run with seed %d: %s, files in %s' % (kind, config.seed, manifest.status, path))
    else:
        print('%s run with seed %d: %s' % (kind, config.seed, manifest.status))

    return manifest

def summarizeCommand(options, dirpaths):
    """ Aggregate run directories into --out, or print the table when there is none.
    """
    if not dirpaths:
        raise Core.KnownUnknown('Give at least one run directory to summarize.')

    output = Outputs.Disk(realpath(options.out)) if options.out else Outputs.Test()
    rows = Outputs.summarize(dirpaths, output)

    if not options.out:
        sys.stdout.write(Outputs.encodeCSV(['metric', 'runs', 'median', 'mean', 'min', 'max'], rows).decode('utf8'))

    return rows

def sweepSeeds(options, config_dict):
    """ Explicit --seeds, or --runs seeds derived from --seed or the configuration seed.
    """
    if options.seeds:
        try:
            seeds = [int(seed) for seed in options.seeds.split(',')]
        except ValueError:
            raise Core.KnownUnknown('Seeds look like "1,2,3", not "%s".' % options.seeds)

    elif options.runs:
        base = config_dict.get('seed') if options.seed is None else options.seed

        if not isinstance(base, int) or isinstance(base, bool) or base < 0:
            raise Core.KnownUnknown('A sweep with --runs needs a non-negative integer --seed or configuration "seed".')

        seeds = Core.childSeeds(base, options.runs)

    else:
        raise Core.KnownUnknown('A sweep needs --seeds or --runs.')

    if len(set(seeds)) != len(seeds) or min(seeds) < 0:
        raise Core.KnownUnknown('Sweep seeds must be distinct and non-negative.')

    return seeds

def _sweepRun(args):
    """ Worker-side run of one sweep seed; returns (seed, dirpath, status).
    """
    config_dict, dirpath, config_bytes, kind, seed, out = args
    config_dict = overrideConfig(config_dict, kind, seed, out)
    manifest = runExperiment(Config.buildConfiguration(config_dict, dirpath, config_bytes))

    return seed, realpath(out), manifest.status

def sweepCommand(options):
    """ Run one configuration over several seeds and summarize, returning [(seed, dirpath, status)].
    """
    if not options.config:
        raise Core.KnownUnknown('Missing required configuration (--config) parameter.')

    if not options.out:
        raise Core.KnownUnknown('Missing required output (--out) parameter.')

    if options.processes < 1:
        raise Core.KnownUnknown('Need at least one process, not %d.' % options.processes)

    config_dict, dirpath, config_bytes = readConfig(options.config)

    if 'kind' not in config_dict or config_dict['kind'] not in Config.KINDS:
        raise Core.KnownUnknown('A sweep configuration needs a known "kind": %s.' % ', '.join(sorted(Config.KINDS)))

    kind, seeds = config_dict['kind'], sweepSeeds(options, config_dict)
    jobs = [(config_dict, dirpath, config_bytes, kind, seed, pathjoin(options.out, 'seed-%d' % seed))
            for seed in seeds]

    # validate once up front, so a bad configuration fails before any process starts
    Config.buildConfiguration(overrideConfig(config_dict, kind, seeds[0], jobs[0][-1]), dirpath, config_bytes)

    if options.processes == 1:
        results = [_sweepRun(job) for job in jobs]
    else:
        pool = Pool(min(options.processes, len(jobs)))

        try:
            results = pool.map(_sweepRun, jobs)
        finally:
            pool.close()
            pool.join()

    for (seed, path, status) in results:
        print('%s run with seed %d: %s, files in %s' % (kind, seed, status, path))

    Outputs.summarize([path for (seed, path, status) in results], Outputs.Disk(realpath(options.out)))

    return results

def main(argv=None):
    """ Run the command line and return an exit status.
    """
    argv = sys.argv[1:] if argv is None else list(argv)

    if not argv or argv[0] not in COMMANDS:
        parser = OptionParser(usage='%%prog <command> [options]\n\nCommands: %s.' % ', '.join(COMMANDS),
                              version=__version__)

        if argv and argv[0] in ('-h', '--help', '--version'):
            parser.parse_args(argv)

        parser.error('Expected a command, one of: %s.' % ', '.join(COMMANDS))

    command = argv[0]
    parser = makeParser(command)
    options, args = parser.parse_args(argv[1:])

    if options.verbosity is not None:
        logging.basicConfig(level=options.verbosity, format='%(levelname)s %(message)s')

    try:
        if command == 'summarize':
            summarizeCommand(options, args)
            return 0

        if args:
            raise Core.KnownUnknown('Unexpected arguments: %s.' % ' '.join(args))

        if command == 'sweep':
            results = sweepCommand(options)
            return 2 if any(status != 'ok' for (seed, path, status) in results) else 0

        manifest = runCommand(RUN_COMMANDS[command], options)

    except Core.KnownUnknown as e:
        parser.error(str(e))

    return 2 if manifest.flagged else 0
