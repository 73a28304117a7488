import pytest
from hypothesis import strategies as st

from meaningwalk import BipartiteGraph, generate_contrast_graph

_criteria: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    label, text = marker.args
    status = "PASS" if report.passed else "FAIL"
    if report.when == "call" or label not in _criteria:
        _criteria[label] = (status, text)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: (len(s.split()[0]), s)):
        status, text = _criteria[label]
        terminalreporter.write_line(f"[{status}] criterion {label}: {text}")


@pytest.fixture
def g1():
    return BipartiteGraph(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)])


@pytest.fixture
def g3():
    return generate_contrast_graph([1, 2, 3])


@pytest.fixture
def k22():
    return BipartiteGraph(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])


@pytest.fixture
def star():
    return BipartiteGraph(1, 3, [(0, 0), (0, 1), (0, 2)])


@st.composite
def strict_graphs(draw, max_n=8, max_m=8):
    """Random strict-mode graphs: every word has at least one meaning."""
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    edges = set()
    for i in range(n):
        row = draw(st.sets(st.integers(0, m - 1), min_size=1, max_size=m))
        edges.update((i, j) for j in row)
    return BipartiteGraph(n, m, edges)


@st.composite
def contrast_graphs(draw, max_words=8, max_degree=6):
    mu = draw(st.lists(st.integers(1, max_degree), min_size=1, max_size=max_words))
    return generate_contrast_graph(mu)


phis = st.sampled_from([0.0, 0.5, 1.0, 2.0])
