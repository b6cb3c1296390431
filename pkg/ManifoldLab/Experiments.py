""" Experiment runs, one function per configuration kind.

Each run takes a Config.Configuration, derives every random stream from its
seed, writes its files to the configured output and finishes by writing
summary.json and then manifest.json. Runs return a RunManifest whose flags
list anything that completed without being trustworthy: a diverged training
run, an uncertified net, a failed bound check. Flagged runs still write all
of their files.

Known kinds:
- learnable
- hard
- sq
- iddim
- geometry
- generate

Files written, besides summary.json, manifest.json and config.json:

    learnable, hard   trace.csv (run, step, train_mse, test_mse, lr)
    sq                sq.csv, pairwise.csv, variance.csv
    iddim             estimates.csv, and cloud.csv for a point cloud
    geometry          duality.csv, coupon.csv, coupon_cdf.csv, net.json
    generate          samples.csv, target.json
"""

import io
import logging
from math import ceil, log
from time import time

import numpy

from . import __version__
from . import Core
from . import Config
from . import Dimension
from . import Geometry
from . import Manifold
from . import Network
from . import Outputs
from . import Queries
from . import Targets

def getExperimentByName(name):
    """ Retrieve an experiment function by kind.

        Raise an exception if the name doesn't work out.
    """
    known = {'learnable': run_learnable, 'hard': run_hard, 'sq': run_sq, 'iddim': run_iddim,
             'geometry': run_geometry, 'generate': run_generate}

    if name in known:
        return known[name]

    raise Core.KnownUnknown('"%s" is not an experiment I know about. Here are some that I do know about: %s.'
                            % (name, ', '.join(sorted(known))))

def _finish(config, start_time, metrics, flags):
    """ Write summary.json and the manifest, and return the manifest.
    """
    output = config.output
    Outputs.saveJSON(output, 'summary.json', dict(kind=config.kind, seed=config.seed, metrics=metrics,
                                                  flags=flags))

    manifest = Outputs.RunManifest(config.kind, config.seed, config.config_bytes, __version__,
                                   time() - start_time, output.files, metrics, flags)
    Outputs.writeManifest(output, manifest)

    for flag in flags:
        logging.warning('ManifoldLab.Experiments %s run flagged: %s', config.kind, flag)

    logging.info('ManifoldLab.Experiments %s run finished with status %s in %.3f',
                 config.kind, manifest.status, manifest.wall_clock)

    return manifest

def _train_config(p, seed, multiplier, fresh):
    return Network.TrainConfig(p['optimizer'], p['learning_rate'], multiplier, p['batch_size'],
                               p['steps'], seed, fresh, p['record_every'])

def _rate_multiplier(p, rng):
    """ One log-multiplier c ~ Unif[-2, 1] per run, or 0 when rates are not randomized.
    """
    return float(rng.uniform(-2, 1)) if p['randomize_rate'] else 0.0

def _trace_rows(name, trace):
    return [dict(row, run=name) for row in trace.rows]

def run_learnable(config):
    """ Random width-ceil(n/4) targets on a d-sphere, learned by a trained student for each n.
    """
    p, start_time = config.parameters, time()
    rng = Core.makeGenerator(config.seed)
    multiplier = _rate_multiplier(p, rng)

    rows, results, flags = [], {}, []

    for (n, stream) in zip(p['ambient_dims'], Core.splitGenerators(rng, len(p['ambient_dims']))):
        n = int(n)
        sampler = Manifold.HypersphereSampler(Manifold.HypersphereSpec.random(p['intrinsic_dim'], n, stream))
        width = p['target_width'] or int(ceil(n / 4.0))
        target = Targets.random_target(n, width, rng=stream, sampler=sampler)

        X_train = sampler.sample(p['train_size'], stream)
        X_test = sampler.sample(p['test_size'], stream)
        data = Network.FixedData(X_train, Network.forward(target, X_train))

        student = Network.init_network(n, [p['student_width']], stream)
        cfg = _train_config(p, int(stream.integers(0, 2**63 - 1)), multiplier, False)
        trace = Network.train(student, data, cfg, (X_test, Network.forward(target, X_test)))

        name = 'n=%d' % n
        rows += _trace_rows(name, trace)
        results[name] = dict(ambient_n=n, target_width=width, final_test_mse=trace.final_test_mse,
                             diverged=trace.diverged, lr=cfg.rate,
                             below_threshold=bool(trace.final_test_mse <= p['threshold']))

        if trace.diverged:
            flags.append('diverged at %s' % name)

    Outputs.saveCSV(config.output, 'trace.csv', Outputs.TRACE_FIELDS, rows)

    return _finish(config, start_time, dict(runs=results, lr_multiplier=multiplier), flags)

def run_hard(config):
    """ Hard parity targets on Gray-code manifolds, learned from fresh batches for each n_b.

        Every n_b gets the same step budget. With "signed labels" the student
        learns 2f - 1, so a student that has learned nothing sits at relative
        MSE near 1 rather than at the 0.5 of predicting the mean of {0, 1} labels.
    """
    p, start_time = config.parameters, time()
    rng = Core.makeGenerator(config.seed)
    multiplier = _rate_multiplier(p, rng)

    rows, results, flags = [], {}, []

    for (bits, stream) in zip(p['code_bits'], Core.splitGenerators(rng, len(p['code_bits']))):
        manifold = Manifold.ManifoldSpec(p['reach_bound'], p['intrinsic_dim'], int(bits))

        if p['parity_subset'] == 'full':
            spec = Targets.HardTargetSpec.full(manifold, p['truncation'])
        else:
            spec = Targets.HardTargetSpec.random(manifold, stream, p['truncation'])

        target = Targets.hard_target(spec)

        if p['signed_labels']:
            target = Targets.signed_target(target)

        sampler = Manifold.GrayCurve(manifold)

        n = manifold.ambient_n
        widths = [int(ceil(p['width_multiplier'] * n))] * p['student_depth']
        student = Network.init_network(n, widths, stream)

        X_test = sampler.sample(p['test_size'], stream)
        cfg = _train_config(p, int(stream.integers(0, 2**63 - 1)), multiplier, True)
        trace = Network.train(student, Network.FreshData(sampler, target), cfg,
                              (X_test, Network.forward(target, X_test)))

        name = 'n_b=%d' % bits
        rows += _trace_rows(name, trace)
        results[name] = dict(code_bits=int(bits), ambient_n=n, truncation=spec.truncation,
                             subset=spec.subset.indexes, signed_labels=p['signed_labels'],
                             final_test_mse=trace.final_test_mse,
                             diverged=trace.diverged, lr=cfg.rate,
                             below_threshold=bool(trace.final_test_mse <= p['threshold']))

        if trace.diverged:
            flags.append('diverged at %s' % name)

    Outputs.saveCSV(config.output, 'trace.csv', Outputs.TRACE_FIELDS, rows)

    return _finish(config, start_time, dict(runs=results, lr_multiplier=multiplier), flags)

def run_sq(config):
    """ Query counts of the correlation scan, pairwise independence and the variance bound.
    """
    p, start_time = config.parameters, time()
    scaling_rng, pairwise_rng, variance_rng = Core.splitGenerators(config.seed, 3)
    flags = []

    rows, slope = Queries.scaling_experiment(p['code_bits'], p['tolerance'], scaling_rng,
                                             p['reach_bound'], batch=p['batch'])
    pairwise = []

    for row in rows:
        manifold = Manifold.ManifoldSpec(p['reach_bound'], 1, row['n_b'])
        function_class = Queries.ManifoldParityClass(manifold, row['t'])

        sampled = Queries.pairwise_independence(function_class, mode='monte-carlo',
                                                trials=p['pairwise_trials'], rng=pairwise_rng)
        exact = Queries.pairwise_independence(function_class, mode='exact') if row['n_b'] <= 8 else None
        eta = sampled.eta if exact is None else exact.eta

        row['lower_bound'] = Queries.query_lower_bound(p['tolerance'], eta)
        pairwise.append(dict(n_b=row['n_b'], t=row['t'], eta_exact=None if exact is None else exact.eta,
                             eta_sampled=sampled.eta, stderr=sampled.stderr,
                             bound=2.0 ** (row['t'] - row['n_b']) + 8 * 2.0 ** -row['t']))

        if not row['success']:
            flags.append('correlation scan missed the target at n_b=%d' % row['n_b'])

    parity = Queries.ParityClass(p['parity_dim'])
    eta = Queries.pairwise_independence(parity, mode='exact').eta
    queries = Queries.random_linear_queries(p['parity_dim'], p['variance_queries'], variance_rng)
    queries += [Queries.CorrelationQuery(parity, int(variance_rng.integers(0, parity.size))), Queries.ConstantQuery(0.5)]
    variance = Queries.variance_bound_check(parity, queries, eta)

    if not variance['passed']:
        flags.append('variance bound failed for the parity class')

    output = config.output
    Outputs.saveCSV(output, 'sq.csv', ['n_b', 't', 'tau', 'queries_used', 'success', 'lower_bound'], rows)
    Outputs.saveCSV(output, 'pairwise.csv', ['n_b', 't', 'eta_exact', 'eta_sampled', 'stderr', 'bound'], pairwise)
    Outputs.saveCSV(output, 'variance.csv', ['query', 'variance', 'bound', 'sigma', 'passed'], variance['rows'])

    metrics = dict(slope=slope, parity_eta=eta, variance_passed=variance['passed'],
                   max_variance=max(row['variance'] for row in variance['rows']),
                   queries=dict(('n_b=%d' % row['n_b'], row['queries_used']) for row in rows))

    return _finish(config, start_time, metrics, flags)

def run_iddim(config):
    """ Dimension estimates for the sphere suite, and for a point cloud when one is configured.
    """
    p, start_time = config.parameters, time()
    suite_rng, cloud_rng = Core.splitGenerators(config.seed, 2)

    spheres = [(int(ambient), int(intrinsic)) for (ambient, intrinsic) in p['spheres']]
    rows = Dimension.sphere_suite(suite_rng, spheres, p['centers'], p['sigma'], p['neighbors'],
                                  p['threshold'], p['shift'])

    Outputs.saveCSV(config.output, 'estimates.csv',
                    ['ambient', 'intrinsic', 'estimate', 'rounded', 'gap', 'method'], rows)

    metrics = dict(('n=%d,d=%d' % (row['ambient'], row['intrinsic']), row['estimate']) for row in rows)

    if p['point_cloud']:
        points = Dimension.read_point_cloud(p['point_cloud'])
        neighbors = p['cloud_neighbors'] or 2 * points.shape[1]
        centers = sorted(int(i) for i in cloud_rng.choice(len(points), min(p['centers'], len(points)), replace=False))
        estimates = Dimension.estimate_cloud(points, centers, neighbors, p['threshold'], p['shift'])

        config.output.save('cloud.csv', _estimates_csv(estimates, centers))
        metrics['cloud'] = float(numpy.mean([e.raw for e in estimates]))

    return _finish(config, start_time, metrics, [])

def _estimates_csv(estimates, centers):
    buffer = io.StringIO()
    Dimension.write_estimates(buffer, estimates, centers)
    return buffer.getvalue().encode('utf8')

def run_geometry(config):
    """ Cover and packing duality on random clouds, coupon collector times, and an optional net.
    """
    p, start_time = config.parameters, time()
    cloud_rng, coupon_rng, net_rng = Core.splitGenerators(config.seed, 3)
    flags = []

    duality = []

    for i in range(p['clouds']):
        report = Geometry.cover_report(cloud_rng.uniform(0, 1, size=(p['cloud_size'], 2)), p['epsilon'])
        duality.append(dict(report.to_dict(), cloud=i))

        if not report.holds:
            flags.append('duality chain broken on cloud %d' % i)

    coupons, cdf = [], []

    for n in p['coupon_bins']:
        result = Geometry.coupon_collector_sim(int(n), p['coupon_trials'], coupon_rng)
        coupons.append(dict(n=n, trials=result['trials'], mean_T=result['mean_T'], stderr=result['stderr'],
                            expected=result['expected'],
                            relative_error=abs(result['mean_T'] - result['expected']) / result['expected']))

        for (value, fraction) in result['empirical_cdf']:
            c = (value - n * log(n)) / n
            cdf.append(dict(n=n, value=value, cdf=fraction, limit=Geometry.coupon_limit_cdf(c)))

    output = config.output
    Outputs.saveCSV(output, 'duality.csv', ['cloud', 'epsilon', 'packing_double', 'cover_size', 'packing_size', 'holds'], duality)
    Outputs.saveCSV(output, 'coupon.csv', ['n', 'trials', 'mean_T', 'stderr', 'expected', 'relative_error'], coupons)
    Outputs.saveCSV(output, 'coupon_cdf.csv', ['n', 'value', 'cdf', 'limit'], cdf)

    metrics = dict(duality_holds=all(row['holds'] for row in duality),
                   coupon=dict(('n=%d' % row['n'], row['mean_T']) for row in coupons))

    if p['sampler'] is not None:
        sampler = Config.parseConfigSampler(p['sampler'], net_rng)
        net = Geometry.build_net(sampler, p['net_epsilon'], p['net_delta'], p['max_samples'], net_rng)
        recheck = Geometry.recheck_net(net, sampler, 10 * max(net.trials, 1), net_rng)

        Outputs.saveJSON(output, 'net.json', net.to_dict())
        metrics['net'] = dict(anchors=len(net), samples=net.samples, certified=net.certified,
                              upper_bound=net.upper_bound, recheck_miss_rate=recheck)

        if not net.certified:
            flags.append('net uncertified after %d samples' % net.samples)

    return _finish(config, start_time, metrics, flags)

def run_generate(config):
    """ Samples from a configured sampler, labeled by an optional hard or random target.
    """
    p, start_time = config.parameters, time()
    sampler_rng, target_rng, sample_rng = Core.splitGenerators(config.seed, 3)

    sampler = Config.parseConfigSampler(p['sampler'], sampler_rng)
    target, target_info = None, None

    if p['target'] is not None:
        target, target_info = _build_target(p['target'], sampler, target_rng)

    X = sampler.sample(p['count'], sample_rng)
    fields = ['x%d' % i for i in range(X.shape[1])]
    rows = [dict(zip(fields, x)) for x in X]

    if target is not None:
        fields.append('label')
        for (row, label) in zip(rows, Network.forward(target, X)):
            row['label'] = label

        Outputs.saveJSON(config.output, 'target.json', dict(target_info, network=target.to_dict()))

    Outputs.saveCSV(config.output, 'samples.csv', fields, rows)

    return _finish(config, start_time, dict(count=p['count'], ambient_n=X.shape[1],
                                            labeled=target is not None), [])

def _build_target(target_dict, sampler, rng):
    """ Return (network, description) for a "target" parameter block.
    """
    if target_dict['kind'] == 'hard':
        Config._checkKeys(target_dict, ('kind', 'subset', 'truncation'), 'A hard target')

        if not isinstance(sampler, Manifold.GrayCurve):
            raise Core.KnownUnknown('Hard targets live on a "gray curve" sampler.')

        if 'subset' in target_dict:
            spec = Targets.HardTargetSpec(sampler.spec, target_dict['subset'], target_dict.get('truncation'))
        else:
            spec = Targets.HardTargetSpec.random(sampler.spec, rng, target_dict.get('truncation'))

        return Targets.hard_target(spec), dict(kind='hard', spec=spec.to_dict())

    Config._checkKeys(target_dict, ('kind', 'width', 'weight bound'), 'A random target')

    width = target_dict.get('width', int(ceil(sampler.ambient_n / 4.0)))
    target = Targets.random_target(sampler.ambient_n, width, target_dict.get('weight bound'), rng, sampler)

    return target, dict(kind='random', width=width)
