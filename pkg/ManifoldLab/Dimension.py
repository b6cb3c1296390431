""" Intrinsic dimension from local difference vectors.

Around a manifold point p, noise of scale sigma is added and every noisy
point is projected back onto the manifold; the projected differences span
the tangent space at p, up to curvature terms of order sigma^2. The
singular spectrum of the centered difference matrix then shows d large
values and ambient_n - d small ones.

The stable rank ||M||_F^2 / ||M||_2^2 counts large singular values in a
noise-tolerant way. estimate_intrinsic_dim() truncates values below a
relative threshold and then reads the dimension off one of three shifts:

- spectrum: with r_i = s_i / s_max, d = sum r_i (2 - r_i), which is the
  number of singular values minus the stable rank of diag(s_max - s_i).
- square: on the square Gram matrix G = M M^T / N, d = n minus the stable
  rank of lambda_max I - G.
- none: the stable rank of the truncated matrix itself.

A spectral-gap estimate, the index of the largest ratio of consecutive
singular values, is reported alongside.

Example iddim experiment parameters, for JSON configuration file:

    "parameters": {
      "spheres": [[20, 2], [20, 10], [100, 50], [100, 90]],
      "centers": 5,
      "threshold": 0.1,
      "shift": "spectrum"
    }
"""

import csv
import logging
from time import time

import numpy
from scipy.linalg import svdvals
from scipy.spatial import cKDTree

from . import Core
from . import Manifold
from .Core import DomainError

SHIFTS = ('spectrum', 'square', 'none')

SPHERE_SUITE = [(20, 2), (20, 10), (100, 50), (100, 90)]

class NeighborhoodMatrix:
    """ Difference vectors around a center, one per column: shape (ambient_n, N).
    """
    def __init__(self, center, vectors, sigma=None):
        vectors = numpy.asarray(vectors, dtype=numpy.float64)

        if vectors.ndim != 2 or vectors.shape[1] < vectors.shape[0]:
            raise DomainError('A neighborhood needs at least as many columns as rows, got shape %s' % (vectors.shape,))

        if not numpy.all(numpy.isfinite(vectors)):
            raise DomainError('Neighborhood columns must be finite')

        self.center = numpy.asarray(center, dtype=numpy.float64)
        self.vectors = vectors
        self.sigma = sigma

class DimensionEstimate:
    """ Raw and rounded dimension, the spectrum behind it and how it was read.
    """
    def __init__(self, raw, spectrum, method, gap):
        self.raw = float(raw)
        self.rounded = int(round(self.raw))
        self.spectrum = numpy.asarray(spectrum)
        self.method = method
        self.gap = int(gap)

    def to_dict(self):
        return dict(raw=self.raw, rounded=self.rounded, method=self.method, gap=self.gap,
                    spectrum=self.spectrum.tolist())

def feature_scale(sampler):
    """ Local length scale of a sampler: sphere or torus radius, curve arc radius, else 1.
    """
    if isinstance(sampler, Manifold.HypersphereSampler):
        return sampler.spec.radius

    elif isinstance(sampler, Manifold.TorusSampler):
        return sampler.radius

    elif isinstance(sampler, Manifold.GrayCurve):
        return sampler.spec.arc_radius

    return 1.0

def local_neighborhood(sampler, p, sigma, N, rng, rounds=10):
    """ Noise p, project back to the manifold and collect N differences.

        Points where the projection is undefined are skipped with a warning
        and replaced by fresh draws, for up to rounds attempts.
    """
    p = numpy.asarray(p, dtype=numpy.float64)
    n = len(p)

    if N < n:
        raise DomainError('Need at least %d neighbors in %d dimensions, not %d' % (n, n, N))

    rng = Core.makeGenerator(rng)
    columns, skipped = [], 0

    for attempt in range(rounds):
        wanted = N - sum(len(c) for c in columns)

        if wanted <= 0:
            break

        projected, ok = sampler.project(p + sigma * rng.standard_normal((wanted, n)))
        skipped += int(numpy.count_nonzero(~ok))
        columns.append(projected[ok] - p)

    differences = numpy.vstack(columns)

    if skipped:
        logging.warning('ManifoldLab.Dimension.local_neighborhood() skipped %d points with no projection', skipped)

    if len(differences) < N:
        raise DomainError('Collected only %d of %d neighbors' % (len(differences), N))

    return NeighborhoodMatrix(p, differences.T, sigma)

def cloud_neighborhood(points, center_index, N):
    """ Differences from one point of a cloud to its N nearest other points.
    """
    points = numpy.asarray(points, dtype=numpy.float64)

    if N >= len(points):
        raise DomainError('A cloud of %d points has fewer than %d neighbors' % (len(points), N))

    distances, indexes = cKDTree(points).query(points[center_index], N + 1)
    neighbors = points[[i for i in indexes if i != center_index][:N]]

    return NeighborhoodMatrix(points[center_index], (neighbors - points[center_index]).T)

def stable_rank(M):
    """ ||M||_F^2 / ||M||_2^2.
    """
    s = svdvals(numpy.atleast_2d(numpy.asarray(M, dtype=numpy.float64)))

    if len(s) == 0 or s[0] <= 0:
        raise DomainError('Stable rank of a zero matrix is undefined')

    return float(numpy.sum(s * s) / (s[0] * s[0]))

def _gap_index(s):
    positive = s[s > s[0] * 1e-12]

    if len(positive) < 2:
        return len(positive)

    return int(numpy.argmax(positive[:-1] / positive[1:])) + 1

def estimate_intrinsic_dim(M, threshold=0.1, shift='spectrum'):
    """ Dimension of a NeighborhoodMatrix from its truncated, shifted singular spectrum.
    """
    if shift not in SHIFTS:
        raise Core.KnownUnknown('"%s" is not a shift I know about. Here are some that I do know about: %s.'
                                % (shift, ', '.join(SHIFTS)))

    D = M.vectors - M.vectors.mean(axis=1)[:, None]
    n, N = D.shape
    s = svdvals(D)

    if s[0] <= 0:
        raise DomainError('All difference vectors are identical')

    kept = numpy.where(s >= threshold * s[0], s, 0)

    if shift == 'spectrum':
        r = kept / s[0]
        raw = numpy.sum(r * (2 - r))

    elif shift == 'square':
        eigen = numpy.square(kept) / N
        A = numpy.diag(eigen[0] - numpy.concatenate([eigen, numpy.zeros(n - len(eigen))]))
        raw = n - stable_rank(A) if numpy.any(A) else n

    else:
        raw = numpy.sum(kept * kept) / (s[0] * s[0])

    return DimensionEstimate(min(max(raw, 0), n), s, 'stable-rank/%s' % shift, _gap_index(s))

def sphere_suite(rng, spheres=SPHERE_SUITE, centers=5, sigma=None, neighbors=None, threshold=0.1, shift='spectrum'):
    """ Estimate the dimension of spheres of intrinsic dimension k in random (k + 1)-dimensional subspaces.

        spheres lists (ambient_n, k) pairs. sigma defaults to 0.05 times the
        radius and neighbors to 20 ambient_n. Each row averages the raw
        estimate over several random centers.
    """
    rows = []

    for ((ambient, intrinsic), stream) in zip(spheres, Core.splitGenerators(rng, len(spheres))):
        start_time = time()
        sampler = Manifold.HypersphereSampler(Manifold.HypersphereSpec.random(intrinsic + 1, ambient, stream))
        estimates = estimate_sampler(sampler, centers, stream, sigma, neighbors, threshold, shift)

        raw = float(numpy.mean([e.raw for e in estimates]))
        rows.append(dict(ambient=ambient, intrinsic=intrinsic, estimate=raw, rounded=int(round(raw)),
                         gap=int(numpy.median([e.gap for e in estimates])), method=estimates[0].method))

        logging.info('ManifoldLab.Dimension.sphere_suite() n=%d d=%d estimated %.2f in %.3f',
                     ambient, intrinsic, raw, time() - start_time)

    return rows

def estimate_sampler(sampler, centers, rng, sigma=None, neighbors=None, threshold=0.1, shift='spectrum'):
    """ One estimate per random center drawn from the sampler.
    """
    rng = Core.makeGenerator(rng)
    sigma = 0.05 * feature_scale(sampler) if sigma is None else sigma
    neighbors = 20 * sampler.ambient_n if neighbors is None else neighbors

    return [estimate_intrinsic_dim(local_neighborhood(sampler, p, sigma, neighbors, rng), threshold, shift)
            for p in sampler.sample(centers, rng)]

def read_point_cloud(path):
    """ Rows of a comma-separated file as points.
    """
    return numpy.atleast_2d(numpy.loadtxt(path, delimiter=',', ndmin=2))

def estimate_cloud(points, centers, neighbors, threshold=0.1, shift='spectrum'):
    """ One estimate per center index of a raw point cloud, with no projection available.
    """
    return [estimate_intrinsic_dim(cloud_neighborhood(points, i, neighbors), threshold, shift) for i in centers]

def write_estimates(file, estimates, centers=None):
    """ Write "center, raw, rounded, method" rows to an open text file.
    """
    writer = csv.DictWriter(file, fieldnames=['center', 'raw', 'rounded', 'method'], lineterminator='\n')
    writer.writeheader()

    for (i, estimate) in enumerate(estimates):
        writer.writerow(dict(center=i if centers is None else centers[i], raw='%.6f' % estimate.raw,
                             rounded=estimate.rounded, method=estimate.method))
