class WorkflowError(Exception):
    """Base exception for every failure raised by the workflow engine and its tools."""

    code = "WORKFLOW"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.message = message

    def __str__(self):
        return f"{self.code}: {self.message}"


class UnknownNodeError(WorkflowError):
    """Node id not present in the process definition"""
    code = "NO_NODE"


class NotRunningError(WorkflowError):
    """Case already left the running status"""
    code = "NOT_RUNNING"


class NotEnabledError(WorkflowError):
    """Attempt to fire a node whose firing rule is not satisfied"""
    code = "NOT_ENABLED"


class BadChoiceError(WorkflowError):
    """
    Choice outside the node's choice domain.
    Raised while driving a case, it carries the partial event log and last state.
    """
    code = "BAD_CHOICE"
    log = None
    state = None


class NotOrJoinError(WorkflowError):
    code = "NOT_ORJOIN"


class CaseRunError(WorkflowError):
    """
    Failure while driving a case to termination.
    Keeps the partial event log and the last state so callers can still report them.
    """

    def __init__(self, message, log=None, state=None, code=None):
        super().__init__(message, code=code)
        self.log = log
        self.state = state


class StepLimitError(CaseRunError):
    """Suspected livelock"""
    code = "STEP_LIMIT"


class ScriptShortError(CaseRunError):
    code = "SCRIPT_SHORT"


class OrJoinBoundError(CaseRunError):
    """OR-join reachability exploration exceeded its bound"""
    code = "ORJOIN_BOUND"


class OracleCapError(WorkflowError):
    code = "ORACLE_CAP"


class DslError(WorkflowError):
    """
    Failure to turn process text into a definition.

    `errors` holds the syntax errors (list of ParseError), `report` the
    ValidationReport when the text parsed but the net is structurally invalid.
    """

    def __init__(self, errors=None, report=None):
        self.errors = list(errors or [])
        self.report = report
        if self.errors:
            first = self.errors[0]
            message = f"{len(self.errors)} syntax error(s), first at {first.span}"
            code = "PARSE"
        else:
            count = len(report.violations) if report is not None else 0
            message = f"{count} structural violation(s)"
            code = "INVALID"
        super().__init__(message, code=code)
