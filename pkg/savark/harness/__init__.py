from savark.harness.audit import AuditRow, audit_pair, audit_tableaux
from savark.harness.config import RunConfig, load_catalog, load_config, resolve_config
from savark.harness.converge import ConvergenceRow, Reference, converge, observed_rates, restrict, run_suite
from savark.harness.equivalence import EquivalenceResult, equivalence_check
from savark.harness.initial_conditions import INITIAL_CONDITIONS, get_initial_condition, random_smooth
from savark.harness.io import read_snapshot, write_snapshot
from savark.harness.run import RunResult, run

__all__ = [
    "AuditRow",
    "ConvergenceRow",
    "EquivalenceResult",
    "INITIAL_CONDITIONS",
    "Reference",
    "RunConfig",
    "RunResult",
    "audit_pair",
    "audit_tableaux",
    "converge",
    "equivalence_check",
    "get_initial_condition",
    "load_catalog",
    "load_config",
    "observed_rates",
    "random_smooth",
    "read_snapshot",
    "resolve_config",
    "restrict",
    "run",
    "run_suite",
    "write_snapshot",
]
