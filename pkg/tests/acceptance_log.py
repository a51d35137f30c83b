"""Collects one pass/fail line per acceptance criterion for the run summary."""

_RESULTS: dict[int, str] = {}


def record(criterion: int, passed: bool, detail: str) -> str:
    line = f"criterion {criterion:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    _RESULTS[criterion] = line
    print(line)
    return line


def lines() -> list[str]:
    return [_RESULTS[k] for k in sorted(_RESULTS)]
