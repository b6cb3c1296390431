""" The manifold bits of ManifoldLab.

A Sampler draws i.i.d. points from a data manifold embedded in R^n. The
central one is the Gray-code space-filling curve: a closed chain of quarter
circles of radius sqrt(delta_r)/2 through the corners of {0,1}^n_b, each bit
repeated delta_r = ceil(4 R^2) times so that the curve has reach at least R.
For intrinsic dimension d > 1 the curve is multiplied by the cube [0,1]^(d-1),
which occupies the last d - 1 ambient coordinates.

Built-in samplers:
- gray curve
- hypersphere
- torus
- point
- boolean cube
- euclidean space

Example built-in sampler, for JSON configuration file:

    "sampler": {
      "name": "gray curve",
      "reach bound": 0.5,
      "intrinsic dim": 1,
      "code bits": 8
    }

Example external sampler, for JSON configuration file:

    "sampler": {
      "class": "Module:Classname",
      "kwargs": {"frob": "yes"}
    }

A sampler must provide these methods:

- sample(count, rng): a (count, n) array of i.i.d. manifold points.
- project(points): a pair of (projected points, boolean mask), the nearest
  manifold point to each row and whether the projection was well defined.

Samplers used with the reach probe also provide reach_pairs(count, rng),
returning points p, tangent bases at p and partner points q.
"""

import logging
from math import ceil, pi, sqrt

import numpy
from scipy.stats import ortho_group

try:
    from simplejson import dumps as json_dumps, loads as json_loads
except ImportError:
    from json import dumps as json_dumps, loads as json_loads

from . import Core
from . import GrayCode
from .Core import DomainError

HALF_PI = pi / 2

class ManifoldSpec:
    """ Parameters of one Gray-code space-filling manifold.

        Derived attributes:
        - delta_r: coordinate repeats per code bit, ceil(4 R^2).
        - curve_dim: ambient coordinates used by the curve, delta_r * n_b.
        - ambient_n: curve_dim + d - 1.
        - arc_radius: sqrt(delta_r) / 2, the radius of every quarter circle.
    """
    def __init__(self, reach_bound, intrinsic_dim, code_bits):
        if not reach_bound > 0:
            raise DomainError('Reach bound must be positive, not %s' % reach_bound)

        if int(intrinsic_dim) != intrinsic_dim or intrinsic_dim < 1:
            raise DomainError('Intrinsic dimension must be a positive integer, not %s' % intrinsic_dim)

        if int(code_bits) != code_bits or code_bits < 2 or code_bits > GrayCode.MAX_WIDTH:
            raise DomainError('Code bits must be an integer in [2, %d], not %s' % (GrayCode.MAX_WIDTH, code_bits))

        self.reach_bound = float(reach_bound)
        self.intrinsic_dim = int(intrinsic_dim)
        self.code_bits = int(code_bits)

        # rounding guards against 4 * 0.5**2 style values landing a hair above an integer
        self.delta_r = int(ceil(round(4 * self.reach_bound ** 2, 9)))
        self.curve_dim = self.delta_r * self.code_bits
        self.ambient_n = self.curve_dim + self.intrinsic_dim - 1
        self.arc_radius = sqrt(self.delta_r) / 2
        self.segments = 1 << self.code_bits

        self._geometry = None

    def __eq__(self, other):
        return isinstance(other, ManifoldSpec) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'ManifoldSpec(reach_bound=%r, intrinsic_dim=%d, code_bits=%d)' \
             % (self.reach_bound, self.intrinsic_dim, self.code_bits)

    def to_dict(self):
        return dict(reach_bound=self.reach_bound, intrinsic_dim=self.intrinsic_dim,
                    code_bits=self.code_bits)

    @staticmethod
    def from_dict(spec_dict):
        """ Build a spec from a JSON-style dictionary, validating any derived fields present.
        """
        try:
            spec = ManifoldSpec(spec_dict['reach_bound'], spec_dict['intrinsic_dim'], spec_dict['code_bits'])
        except KeyError as e:
            raise Core.KnownUnknown('Manifold spec is missing required key %s' % e)

        for key in ('delta_r', 'ambient_n'):
            if key in spec_dict and spec_dict[key] != getattr(spec, key):
                raise DomainError('Manifold spec says %s=%s but its parameters give %s'
                                  % (key, spec_dict[key], getattr(spec, key)))

        return spec

    def dumps(self):
        return json_dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def loads(text):
        return ManifoldSpec.from_dict(json_loads(text))

    def corners(self):
        """ Return expanded code words b_k for every k, a (2^n_b, curve_dim) array.
        """
        return self.geometry()[0]

    def geometry(self):
        """ Return (corners, centers, u, w) arrays describing every quarter circle.

            Segment k is centers[k] + u[k] cos t + w[k] sin t for t in [0, pi/2].
        """
        if self._geometry is None:
            codes = GrayCode.gray_table(self.code_bits)
            corners = numpy.repeat(codes, self.delta_r, axis=1).astype(numpy.float64)

            previous = numpy.roll(corners, 1, axis=0)
            following = numpy.roll(corners, -1, axis=0)

            centers = (previous + following) / 2
            u = (corners - following) / 2
            w = (corners - previous) / 2

            self._geometry = corners, centers, u, w

        return self._geometry

class ManifoldPoint:
    """ One point on a Gray-code manifold, with its parameters.
    """
    def __init__(self, segment, angle, cube_coords, ambient):
        self.segment = segment
        self.angle = angle
        self.cube_coords = cube_coords
        self.ambient = ambient

    def __repr__(self):
        return 'ManifoldPoint(segment=%d, angle=%.6f)' % (self.segment, self.angle)

class HypersphereSpec:
    """ A sphere of given radius in the span of an orthonormal n x d basis.

        The sampled set is the unit (d-1)-sphere of the d-dimensional subspace
        scaled by radius.
    """
    def __init__(self, intrinsic_dim, ambient_n, basis=None, radius=1.0):
        if intrinsic_dim < 1 or ambient_n < intrinsic_dim:
            raise DomainError('Need 1 <= intrinsic dim <= ambient dim, not %s and %s' % (intrinsic_dim, ambient_n))

        if not radius > 0:
            raise DomainError('Sphere radius must be positive, not %s' % radius)

        if basis is None:
            basis = numpy.eye(ambient_n)[:, :intrinsic_dim]

        basis = numpy.asarray(basis, dtype=numpy.float64)

        if basis.shape != (ambient_n, intrinsic_dim):
            raise DomainError('Basis has shape %s, expected %s' % (basis.shape, (ambient_n, intrinsic_dim)))

        if numpy.abs(basis.T.dot(basis) - numpy.eye(intrinsic_dim)).max() > 1e-10:
            raise DomainError('Sphere basis columns are not orthonormal')

        self.intrinsic_dim = int(intrinsic_dim)
        self.ambient_n = int(ambient_n)
        self.basis = basis
        self.radius = float(radius)

    @staticmethod
    def random(intrinsic_dim, ambient_n, rng, radius=1.0):
        """ Build a sphere spanning a uniformly random d-dimensional subspace.
        """
        if ambient_n == 1:
            rotation = numpy.ones((1, 1))
        else:
            rotation = ortho_group.rvs(ambient_n, random_state=Core.makeGenerator(rng))

        return HypersphereSpec(intrinsic_dim, ambient_n, rotation[:, :intrinsic_dim], radius)

    def to_dict(self):
        return dict(intrinsic_dim=self.intrinsic_dim, ambient_n=self.ambient_n,
                    radius=self.radius, basis=self.basis.tolist())

    @staticmethod
    def from_dict(spec_dict):
        return HypersphereSpec(spec_dict['intrinsic_dim'], spec_dict['ambient_n'],
                               spec_dict.get('basis'), spec_dict.get('radius', 1.0))

def segment_point(spec, k, t):
    """ Return the curve coordinates of segment k at angle t.
    """
    if not (-1e-12 <= t <= HALF_PI + 1e-12):
        raise DomainError('Segment angle %s is outside [0, pi/2]' % t)

    k = GrayCode.code_index(k, spec.code_bits)
    corners, centers, u, w = spec.geometry()

    return centers[k] + u[k] * numpy.cos(t) + w[k] * numpy.sin(t)

def embed(spec, segments, angles, cube):
    """ Vectorized segment_point: ambient coordinates for arrays of parameters.
    """
    corners, centers, u, w = spec.geometry()
    segments = numpy.asarray(segments, dtype=numpy.int64)
    angles = numpy.asarray(angles, dtype=numpy.float64)

    curve = centers[segments] + u[segments] * numpy.cos(angles)[:, None] \
          + w[segments] * numpy.sin(angles)[:, None]

    return numpy.hstack([curve, numpy.asarray(cube, dtype=numpy.float64).reshape(len(segments), spec.intrinsic_dim - 1)])

def sample_parameters(spec, count, rng):
    """ Draw count uniform (segment, angle, cube) parameter triples.
    """
    segments = rng.integers(0, spec.segments, size=count)
    angles = rng.uniform(0, HALF_PI, size=count)
    cube = rng.uniform(0, 1, size=(count, spec.intrinsic_dim - 1))

    return segments, angles, cube

def sample_uniform(spec, rng):
    """ Draw one point uniformly with respect to arc length times cube volume.

        Every segment has the same length, so a uniform segment index and a
        uniform angle give the uniform curve measure.
    """
    segments, angles, cube = sample_parameters(spec, 1, rng)
    ambient = embed(spec, segments, angles, cube)[0]

    return ManifoldPoint(int(segments[0]), float(angles[0]), cube[0], ambient)

def round_to_corner(x):
    """ Round every coordinate to the nearest of 0 and 1, with 0.5 going to 1.
    """
    return (numpy.asarray(x) >= 0.5).astype(numpy.uint8)

def project_P(x, spec, prefix_len):
    """ Take the leading coordinate of each delta_r block, keeping prefix_len of them.

        Works on a single ambient vector or on rows of a matrix.
    """
    if prefix_len < 1 or prefix_len > spec.code_bits:
        raise DomainError('Prefix length must be in [1, %d], not %s' % (spec.code_bits, prefix_len))

    x = numpy.asarray(x)
    return x[..., 0:prefix_len * spec.delta_r:spec.delta_r]

def _is_boolean(values):
    return numpy.all((numpy.abs(values) < 1e-12) | (numpy.abs(values - 1) < 1e-12), axis=-1)

def boolean_prefix_stats(spec, t, trials, rng):
    """ Monte Carlo estimates of P[prefix is Boolean] and P[two prefixes collide].

        The prefix is the first n_b - t block leaders. A collision means two
        independent points whose prefixes are both Boolean and equal.
    """
    if t < 1 or t >= spec.code_bits:
        raise DomainError('Truncation must be in [1, %d), not %s' % (spec.code_bits, t))

    prefix_len = spec.code_bits - t
    sampler = GrayCurve(spec)

    first = project_P(sampler.sample(trials, rng), spec, prefix_len)
    second = project_P(sampler.sample(trials, rng), spec, prefix_len)

    boolean = _is_boolean(first)
    collide = boolean & _is_boolean(second) & numpy.all(numpy.abs(first - second) < 1e-12, axis=1)

    frac_boolean, frac_collision = boolean.mean(), collide.mean()

    return dict(frac_boolean=float(frac_boolean), frac_collision=float(frac_collision), trials=int(trials),
                stderr_boolean=float(sqrt(frac_boolean * (1 - frac_boolean) / trials)),
                stderr_collision=float(sqrt(frac_collision * (1 - frac_collision) / trials)))

def boolean_prefix_table(spec, prefix_len):
    """ Exact distribution of Boolean prefixes over the curve measure.

        Returns (prefixes, weights): distinct Boolean prefix values as rows
        of a uint8 array and the probability of landing on each. The weights
        sum to P[prefix is Boolean]; the rest of the mass has a non-Boolean
        prefix almost surely.

        A segment's prefix is constant, and equal to the prefix of its code
        word, exactly when neither of the bits flipped at its two ends lies
        in the prefix; otherwise a flipped coordinate sweeps through (0, 1).
    """
    flips = GrayCode.flip_positions(spec.code_bits)
    entering, leaving = numpy.roll(flips, 1), flips

    steady = (entering >= prefix_len) & (leaving >= prefix_len)
    codes = GrayCode.gray_table(spec.code_bits)[steady, :prefix_len]

    prefixes, counts = numpy.unique(codes, axis=0, return_counts=True)

    return prefixes, counts / float(spec.segments)

def exact_boolean_prefix_stats(spec, t):
    """ Exact counterparts of boolean_prefix_stats() by segment enumeration.
    """
    if t < 1 or t >= spec.code_bits:
        raise DomainError('Truncation must be in [1, %d), not %s' % (spec.code_bits, t))

    prefixes, weights = boolean_prefix_table(spec, spec.code_bits - t)

    return dict(frac_boolean=float(weights.sum()), frac_collision=float(numpy.square(weights).sum()))

def sample_hypersphere(spec, count, rng):
    """ Draw count points uniformly from the sphere of a HypersphereSpec.
    """
    return HypersphereSampler(spec).sample(count, rng)

def empirical_reach_probe(manifold, pair_samples, rng):
    """ Lower-bound surrogate for reach from sampled point pairs.

        Returns the minimum over pairs (p, q) of |p - q|^2 / (2 dist(q - p, T_p)),
        with tangent spaces computed analytically. Pairs closer than 1e-9, or
        with q - p inside the tangent space, carry no information and are skipped.
    """
    sampler = _as_sampler(manifold)

    if isinstance(sampler, GrayCurve) and sampler.spec.code_bits > 10:
        raise DomainError('Reach probe is limited to 10 code bits, not %d' % sampler.spec.code_bits)

    p, tangents, q = sampler.reach_pairs(pair_samples, rng)
    delta = q - p

    along = numpy.einsum('nij,ni->nj', tangents, delta)
    normal = delta - numpy.einsum('nij,nj->ni', tangents, along)

    squared = numpy.einsum('ni,ni->n', delta, delta)
    offset = numpy.sqrt(numpy.einsum('ni,ni->n', normal, normal))

    usable = (squared > 1e-18) & (offset > 1e-15)

    if not usable.any():
        raise DomainError('Reach probe found no informative point pairs')

    logging.debug('ManifoldLab.Manifold.empirical_reach_probe() kept %d of %d pairs', usable.sum(), len(p))

    return float(numpy.min(squared[usable] / (2 * offset[usable])))

def _as_sampler(manifold):
    if isinstance(manifold, ManifoldSpec):
        return GrayCurve(manifold)

    elif isinstance(manifold, HypersphereSpec):
        return HypersphereSampler(manifold)

    return manifold

class GrayCurve:
    """ Uniform sampler over a Gray-code manifold, with exact projection.

        Example configuration:

            "sampler": {
              "name": "gray curve",
              "reach bound": 0.5,
              "intrinsic dim": 1,
              "code bits": 8
            }
    """
    def __init__(self, spec):
        self.spec = spec
        self.ambient_n = spec.ambient_n
        self.manifold_dim = spec.intrinsic_dim

    def sample(self, count, rng):
        return embed(self.spec, *sample_parameters(self.spec, count, rng))

    def project(self, points):
        """ Nearest curve point for each row, found by projecting onto every quarter circle.
        """
        segments, angles, cube = self.parameters(points)
        return embed(self.spec, segments, angles, cube), numpy.ones(len(segments), dtype=bool)

    def parameters(self, points):
        """ Return (segments, angles, cube) of the nearest manifold points.
        """
        spec = self.spec
        points = numpy.atleast_2d(numpy.asarray(points, dtype=numpy.float64))

        curve = points[:, :spec.curve_dim]
        cube = numpy.clip(points[:, spec.curve_dim:], 0, 1)

        corners, centers, u, w = spec.geometry()
        rho2 = spec.arc_radius ** 2

        # (y - c) . u and (y - c) . w for every point and every segment
        cu = curve.dot(u.T) - numpy.einsum('ki,ki->k', centers, u)[None, :]
        cw = curve.dot(w.T) - numpy.einsum('ki,ki->k', centers, w)[None, :]

        angle = numpy.arctan2(cw, cu)
        angle = numpy.where(angle < -0.75 * pi, HALF_PI, numpy.clip(angle, 0, HALF_PI))

        offset2 = numpy.square(curve).sum(axis=1)[:, None] - 2 * curve.dot(centers.T) \
                + numpy.square(centers).sum(axis=1)[None, :]

        distance2 = offset2 - 2 * (numpy.cos(angle) * cu + numpy.sin(angle) * cw) + rho2

        segments = numpy.argmin(distance2, axis=1)
        angles = angle[numpy.arange(len(points)), segments]

        return segments, angles, cube

    def tangent_basis(self, segments, angles):
        """ Orthonormal tangent bases, shape (count, n, d), from curve parameters.
        """
        spec = self.spec
        corners, centers, u, w = spec.geometry()
        count = len(segments)

        basis = numpy.zeros((count, spec.ambient_n, spec.intrinsic_dim))
        direction = -u[segments] * numpy.sin(angles)[:, None] + w[segments] * numpy.cos(angles)[:, None]
        basis[:, :spec.curve_dim, 0] = direction / spec.arc_radius

        for j in range(1, spec.intrinsic_dim):
            basis[:, spec.curve_dim + j - 1, j] = 1

        return basis

    def reach_pairs(self, count, rng):
        """ Half local pairs, a fraction of a segment apart along the curve, half global pairs.
        """
        spec = self.spec
        segments, angles, cube = sample_parameters(spec, count, rng)
        p = embed(spec, segments, angles, cube)

        position = segments + angles / HALF_PI
        local = position + rng.uniform(-0.5, 0.5, size=count)
        remote = rng.uniform(0, spec.segments, size=count)
        position = numpy.where(numpy.arange(count) % 2 == 0, local, remote) % spec.segments

        q_segments = numpy.floor(position).astype(numpy.int64) % spec.segments
        q_angles = (position - numpy.floor(position)) * HALF_PI
        q = embed(spec, q_segments, q_angles, cube)

        return p, self.tangent_basis(segments, angles), q

    def exact_prefix_table(self, prefix_len):
        return boolean_prefix_table(self.spec, prefix_len)

class HypersphereSampler:
    """ Uniform sampler over a sphere in a linear subspace.

        Example configuration:

            "sampler": {
              "name": "hypersphere",
              "intrinsic dim": 10,
              "ambient dim": 32
            }

        The subspace is drawn at random from the run seed unless "random
        basis" is false, in which case the first d coordinate axes are used.
    """
    def __init__(self, spec):
        self.spec = spec
        self.ambient_n = spec.ambient_n
        self.manifold_dim = spec.intrinsic_dim - 1

    def sample(self, count, rng):
        gaussian = rng.standard_normal((count, self.spec.intrinsic_dim))
        directions = gaussian / numpy.linalg.norm(gaussian, axis=1)[:, None]

        return self.spec.radius * directions.dot(self.spec.basis.T)

    def project(self, points):
        points = numpy.atleast_2d(numpy.asarray(points, dtype=numpy.float64))
        inside = points.dot(self.spec.basis)
        norms = numpy.linalg.norm(inside, axis=1)

        ok = norms > 1e-12
        directions = numpy.zeros_like(inside)
        directions[ok] = inside[ok] / norms[ok, None]

        return self.spec.radius * directions.dot(self.spec.basis.T), ok

    def tangent_basis(self, points):
        """ Orthonormal tangent bases, shape (count, n, d - 1), at sphere points.
        """
        basis = self.spec.basis
        inside = points.dot(basis) / self.spec.radius
        tangents = []

        for direction in inside:
            # complete the normal direction to an orthonormal frame of the subspace
            frame, _ = numpy.linalg.qr(numpy.column_stack([direction, numpy.eye(len(direction))]))
            tangents.append(basis.dot(frame[:, 1:len(direction)]))

        return numpy.array(tangents)

    def reach_pairs(self, count, rng):
        p = self.sample(count, rng)
        jitter = rng.standard_normal(p.shape).dot(self.spec.basis).dot(self.spec.basis.T)

        scale = numpy.where(numpy.arange(count) % 2 == 0, 0.3, 3.0) * self.spec.radius
        q, ok = self.project(p + scale[:, None] * jitter / numpy.sqrt(self.spec.intrinsic_dim))

        return p[ok], self.tangent_basis(p[ok]), q[ok]

class TorusSampler:
    """ Flat torus: a product of circles, each in its own coordinate plane.

        Each circle has the given radius, so curvature is bounded by 1/radius
        and reach equals radius; the intrinsic dimension is the circle count.

        Example configuration:

            "sampler": {
              "name": "torus",
              "circles": 3,
              "radius": 1.0,
              "ambient dim": 8
            }
    """
    def __init__(self, circles, radius=1.0, ambient_n=None):
        ambient_n = 2 * circles if ambient_n is None else ambient_n

        if circles < 1 or ambient_n < 2 * circles or not radius > 0:
            raise DomainError('Torus needs circles >= 1, radius > 0 and ambient dim >= 2 * circles')

        self.circles = int(circles)
        self.radius = float(radius)
        self.ambient_n = int(ambient_n)
        self.manifold_dim = self.circles

    def embed(self, angles):
        points = numpy.zeros((len(angles), self.ambient_n))
        points[:, 0:2 * self.circles:2] = self.radius * numpy.cos(angles)
        points[:, 1:2 * self.circles:2] = self.radius * numpy.sin(angles)
        return points

    def sample(self, count, rng):
        return self.embed(rng.uniform(0, 2 * pi, size=(count, self.circles)))

    def project(self, points):
        points = numpy.atleast_2d(numpy.asarray(points, dtype=numpy.float64))
        x, y = points[:, 0:2 * self.circles:2], points[:, 1:2 * self.circles:2]

        ok = numpy.all(numpy.hypot(x, y) > 1e-12, axis=1)
        return self.embed(numpy.arctan2(y, x)), ok

    def tangent_basis(self, angles):
        basis = numpy.zeros((len(angles), self.ambient_n, self.circles))

        for j in range(self.circles):
            basis[:, 2 * j, j] = -numpy.sin(angles[:, j])
            basis[:, 2 * j + 1, j] = numpy.cos(angles[:, j])

        return basis

    def reach_pairs(self, count, rng):
        angles = rng.uniform(0, 2 * pi, size=(count, self.circles))
        spread = numpy.where(numpy.arange(count) % 2 == 0, 0.5, pi)[:, None]
        partners = angles + rng.uniform(-1, 1, size=angles.shape) * spread

        return self.embed(angles), self.tangent_basis(angles), self.embed(partners)

class PointSampler:
    """ Degenerate distribution on a single point.
    """
    def __init__(self, point):
        self.point = numpy.atleast_1d(numpy.asarray(point, dtype=numpy.float64))
        self.ambient_n = len(self.point)
        self.manifold_dim = 0

    def sample(self, count, rng):
        return numpy.tile(self.point, (count, 1))

    def project(self, points):
        points = numpy.atleast_2d(points)
        return numpy.tile(self.point, (len(points), 1)), numpy.ones(len(points), dtype=bool)

class BooleanCube:
    """ Uniform distribution on the corners {0,1}^m.
    """
    def __init__(self, dimension):
        if dimension < 1 or dimension > 20:
            raise DomainError('Boolean cube dimension must be in [1, 20], not %s' % dimension)

        self.ambient_n = int(dimension)
        self.manifold_dim = 0

    def sample(self, count, rng):
        return rng.integers(0, 2, size=(count, self.ambient_n)).astype(numpy.float64)

    def project(self, points):
        points = numpy.atleast_2d(points)
        return round_to_corner(numpy.clip(points, 0, 1)).astype(numpy.float64), numpy.ones(len(points), dtype=bool)

    def support(self):
        """ Every corner with its probability, for exact expectations.
        """
        shifts = numpy.arange(self.ambient_n - 1, -1, -1)
        corners = (numpy.arange(1 << self.ambient_n)[:, None] >> shifts[None, :]) & 1

        return corners.astype(numpy.float64), numpy.full(len(corners), 1.0 / len(corners))

class EuclideanSpace:
    """ The whole of R^n, standard Gaussian samples; projection is the identity.
    """
    def __init__(self, ambient_n):
        self.ambient_n = int(ambient_n)
        self.manifold_dim = self.ambient_n

    def sample(self, count, rng):
        return rng.standard_normal((count, self.ambient_n))

    def project(self, points):
        points = numpy.atleast_2d(numpy.asarray(points, dtype=numpy.float64))
        return points.copy(), numpy.ones(len(points), dtype=bool)

def getSamplerByName(name):
    """ Retrieve a sampler class by name.

        Raise an exception if the name doesn't work out.
    """
    known = {'gray curve': GrayCurve, 'hypersphere': HypersphereSampler, 'torus': TorusSampler,
             'point': PointSampler, 'boolean cube': BooleanCube, 'euclidean space': EuclideanSpace}

    if name.lower() in known:
        return known[name.lower()]

    raise Core.KnownUnknown('"%s" is not a sampler I know about. Here are some that I do know about: %s.'
                            % (name, ', '.join(sorted(known))))
