"""Exception types shared across the toolkit."""


class CapExceeded(RuntimeError):
    """An enumeration bound was hit; raised instead of truncating silently."""

    def __init__(self, cap_name, cap, needed=None, note=None):
        self.cap_name = cap_name
        self.cap = cap
        self.needed = needed
        msg = f"cap {cap_name}={cap} exceeded"
        if needed is not None:
            msg += f" (needed {needed})"
        if note:
            msg += f": {note}"
        super().__init__(msg)


class ValidationError(ValueError):
    """Input data violates a structural requirement.

    ``issues`` holds every problem found, not just the first one.
    """

    def __init__(self, issues):
        if isinstance(issues, str):
            issues = [issues]
        self.issues = list(issues)
        super().__init__("; ".join(self.issues))
