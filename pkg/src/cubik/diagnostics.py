"""Validation reports: a list of problems, each with a witness."""
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Problem:
    kind: str
    witness: tuple
    message: str = ""

    def to_json(self):
        return {"kind": self.kind, "witness": list(self.witness), "message": self.message}


@dataclass
class Diagnostics:
    problems: list = field(default_factory=list)

    def add(self, kind, witness, message=""):
        self.problems.append(Problem(kind, tuple(witness), message))

    @property
    def ok(self):
        return not self.problems

    def __bool__(self):
        return self.ok

    def kinds(self):
        return [p.kind for p in self.problems]

    def find(self, kind):
        for p in self.problems:
            if p.kind == kind:
                return p
        return None

    def to_json(self):
        return {"valid": self.ok, "problems": [p.to_json() for p in self.problems]}
