"""
Prometheus metrics for vvmf batch runs
"""

from typing import Iterable, Optional

from prometheus_client import CollectorRegistry, Counter, Histogram, Info, write_to_textfile

from . import __version__, config
from .checks import Check

registry = CollectorRegistry()

# Package info
vvmf_info = Info("vvmf", "vvmf version", registry=registry)
vvmf_info.info({"version": __version__})

# Command metrics
commands_total = Counter(
    "vvmf_commands_total", "Total commands run", ["command", "status"], registry=registry
)

command_duration_seconds = Histogram(
    "vvmf_command_duration_seconds",
    "Command wall time",
    ["command"],
    buckets=[0.01, 0.05, 0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 30.0, 60.0, 300.0],
    registry=registry,
)

# Check metrics
checks_total = Counter(
    "vvmf_checks_total", "Identity checks evaluated", ["name", "result"], registry=registry  # pass, fail
)


# Helper functions
def record_command(command: str, status: int, duration: float):
    """Record command metrics"""
    commands_total.labels(command=command, status=status).inc()
    command_duration_seconds.labels(command=command).observe(duration)


def record_checks(checks: Iterable[Check]):
    for check in checks:
        # indexed names like principal_part[0,3] share one series
        name = check.name.split("[", 1)[0]
        checks_total.labels(name=name, result="pass" if check.passed else "fail").inc()


def export(path: Optional[str] = None) -> bool:
    """Write the registry to the textfile collector path, if one is configured."""
    path = path or config.METRICS_FILE
    if not path:
        return False
    write_to_textfile(path, registry)
    return True
