""" The core bits of ManifoldLab.

Errors, dynamic class loading and random generator handling shared by every
other module live here.

Two exception classes are used throughout:

- KnownUnknown is raised for expected, user-facing trouble: a configuration
  that names an experiment or sampler nobody has heard of, a class path that
  fails to import, a missing required parameter.
- DomainError is a KnownUnknown raised when a value falls outside the domain
  of an operation: a Gray code index past 2^k, an angle outside [0, pi/2],
  a weight matrix of the wrong shape, an empty net.

Random numbers always come from an explicit numpy Generator. A run begins
with one integer seed; independent streams for workers or repeated trials
are split from it with splitGenerators(), so that a run is replayable from
its seed alone:

    rng = makeGenerator(17)
    worker_rngs = splitGenerators(17, 4)
"""

from sys import modules

import numpy

class KnownUnknown(Exception):
    """ There are known unknowns. That is to say, there are things that we now know we don't know.

        This exception gets thrown in a couple places where common mistakes are made.
    """
    pass

class DomainError(KnownUnknown, ValueError):
    """ An argument falls outside the domain of an operation.
    """
    pass

def makeGenerator(seed):
    """ Return a numpy Generator for an integer seed, or pass a Generator through.
    """
    if isinstance(seed, numpy.random.Generator):
        return seed

    if seed is None:
        raise KnownUnknown('A seed is required, every run must be replayable.')

    return numpy.random.default_rng(numpy.random.SeedSequence(int(seed)))

def splitGenerators(seed, count):
    """ Return a list of count independent Generators derived from one seed.

        The seed may be an integer or an existing Generator, in which case
        child streams are spawned from a seed drawn out of it.
    """
    if isinstance(seed, numpy.random.Generator):
        seed = int(seed.integers(0, 2**63 - 1))

    children = numpy.random.SeedSequence(int(seed)).spawn(int(count))

    return [numpy.random.default_rng(child) for child in children]

def childSeeds(seed, count):
    """ Return count integer seeds derived from one seed, disjoint streams for sweeps.
    """
    children = numpy.random.SeedSequence(int(seed)).spawn(int(count))

    return [int(child.generate_state(1, numpy.uint64)[0] >> 1) for child in children]

def loadClassPath(classpath):
    """ Load external class based on a path.

        Example classpath: "Module.Submodule:Classname".
    """
    if ':' not in classpath:
        raise KnownUnknown('Class paths look like "Module.Submodule:Classname", not "%s".' % classpath)

    modname, objname = classpath.split(':', 1)

    try:
        __import__(modname)
        module = modules[modname]
        _class = eval(objname, module.__dict__)

        if _class is None:
            raise Exception('eval(%(objname)s) in %(modname)s came up None' % locals())

    except Exception as e:
        raise KnownUnknown('Tried to import %s, but: %s' % (classpath, e))

    return _class
