"""Line-oriented check reports shared by the verification operations."""

from __future__ import annotations


class CheckReport:
    """An ordered list of PASS/FAIL lines with an overall verdict.

    Failure lines carry a locator plus both sides of the violated identity,
    so a failing run always pinpoints a concrete counterexample.
    """

    def __init__(self, title: str):
        self.title = title
        self.lines: list[str] = []
        self.failures = 0

    def ok(self, locator: str):
        self.lines.append("PASS %s" % locator)

    def fail(self, locator: str, lhs: str, rhs: str):
        self.lines.append("FAIL %s: lhs=%s rhs=%s" % (locator, lhs, rhs))
        self.failures += 1

    def note(self, text: str):
        self.lines.append(text)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def text(self) -> str:
        head = "%s: %s" % (self.title, "PASS" if self.passed else
                           "FAIL (%d)" % self.failures)
        return "\n".join([head] + self.lines)

    def __repr__(self):
        return "CheckReport(%r, passed=%r)" % (self.title, self.passed)
