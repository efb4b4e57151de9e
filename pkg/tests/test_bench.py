import io

from nwitness import bench, permanent


def test_bench_prints_csv_for_each_backend():
    buf = io.StringIO()
    bench.run(max_dim=4, min_dim=2, repeats=1, out=buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "dim,backend,seconds"
    backends = {line.split(",")[1] for line in lines[1:]}
    assert "numpy" in backends
    assert ("numba" in backends) == permanent.HAVE_NUMBA
    assert len(lines) == 1 + 3 * len(backends)
