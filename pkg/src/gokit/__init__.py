"""gokit: exact-arithmetic toolkit for root-system decompositions and
geodesic-orbit metric verification on compact homogeneous spaces."""

__version__ = "0.1.0"
