import numpy as np
import pytest

from railyard.growth import column_moments
from railyard.model import realize

MPI = pytest.importorskip("mpi4py.MPI")

from railyard.mpi_driver import distributed_moments  # noqa: E402


def test_single_rank_matches_pooled_sampler(single_segment):
    realization = realize(single_segment, 10)
    point = single_segment.point_at(0.5)
    pooled_mean, pooled_se = column_moments(realization, point, (1, 2), count=300, seed=5)
    mean, se = distributed_moments(realization, point, (1, 2), 300, seed=5, comm=MPI.COMM_SELF)
    np.testing.assert_allclose(mean, pooled_mean, rtol=1e-12)
    np.testing.assert_allclose(se, pooled_se, rtol=1e-6)
