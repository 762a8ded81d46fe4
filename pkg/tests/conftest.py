import json

import pytest

from otcluster import discover_dfm, running_example_log, to_markov

THREE_EVENTS = {
    "ocel:global-log": {
        "ocel:version": "1.0",
        "ocel:attribute-names": ["cost"],
        "ocel:object-types": ["order", "item"],
    },
    "ocel:events": {
        "e1": {"ocel:activity": "A", "ocel:timestamp": "2022-01-01T10:00:00Z",
               "ocel:omap": ["o1"], "ocel:vmap": {"cost": 3}},
        "e2": {"ocel:activity": "B", "ocel:timestamp": "2022-01-01T11:00:00Z",
               "ocel:omap": ["o1", "o2"], "ocel:vmap": {}},
        "e3": {"ocel:activity": "C", "ocel:timestamp": "2022-01-01T12:00:00+01:00",
               "ocel:omap": ["o2"], "ocel:vmap": {}},
    },
    "ocel:objects": {
        "o1": {"ocel:type": "order", "ocel:ovmap": {}},
        "o2": {"ocel:type": "item", "ocel:ovmap": {"colour": "red"}},
    },
}

MINIMAL = (b'{"ocel:events":{},"ocel:objects":{},"ocel:global-log":'
           b'{"ocel:object-types":[],"ocel:attribute-names":[],"ocel:version":"1.0"}}')


@pytest.fixture
def three_event_doc():
    return json.loads(json.dumps(THREE_EVENTS))


@pytest.fixture
def three_event_bytes():
    return json.dumps(THREE_EVENTS).encode()


@pytest.fixture(scope="session")
def running_log():
    return running_example_log()


@pytest.fixture(scope="session")
def running_markov(running_log):
    return to_markov(discover_dfm(running_log))


# -- acceptance summary --------------------------------------------------------

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _ACCEPTANCE.append((name, status))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _ACCEPTANCE:
        terminalreporter.write_line(f"{status}  {name}")
