"""Exception types. Each carries the CLI exit code for its pipeline stage."""


class PlanError(Exception):
    exit_code = 1
    stage = "plan"


class ConfigError(PlanError, ValueError):
    exit_code = 2
    stage = "config"


class IngestError(PlanError, ValueError):
    exit_code = 3
    stage = "ingest"


class NumericalError(PlanError, ArithmeticError):
    exit_code = 4
    stage = "numerical"


class InfeasibleError(PlanError, ValueError):
    exit_code = 5
    stage = "clustering"
