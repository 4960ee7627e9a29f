"""Exception hierarchy shared by every module of the toolkit."""


class CCSError(Exception):
    pass


class CCSSyntaxError(CCSError, SyntaxError):
    """Malformed concrete syntax.  Carries 1-based ``line``/``column``."""

    def __init__(self, line: int, column: int, expected: str, found: str = ""):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        msg = f"{line}:{column}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)


class UnboundConstruct(CCSError):
    """A relabeling clause that does not denote a function on names."""


class DefinitionError(CCSError):
    pass


class CaptureError(CCSError):
    pass


class OpenTerm(CCSError):
    pass


class UnguardedRecursion(CCSError):
    pass


class BudgetExceeded(CCSError):
    pass


class StateBudgetExceeded(BudgetExceeded):
    def __init__(self, visited: int, frontier: list):
        self.visited = visited
        self.frontier = frontier
        sample = ", ".join(frontier[:3])
        super().__init__(
            f"state budget exceeded after {visited} states (frontier sample: {sample})"
        )


class NotVisible(CCSError):
    pass


class PreconditionFailed(CCSError):
    pass


class HypothesisFailed(CCSError):
    """Raised by theorem harnesses; ``report`` holds the partial check results."""

    def __init__(self, failed: list[str], report=None):
        self.failed = failed
        self.report = report
        super().__init__("hypothesis failed: " + ", ".join(failed))


class ContextError(CCSError):
    """A term that cannot be read as a single-variable context (e.g. a hole under rec)."""
