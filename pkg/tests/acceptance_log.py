"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

LINES: list[str] = []


def record(number: int, title: str, passed: bool, detail: str, seconds: float) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} -- {detail} ({seconds:.1f} s)"
    print(line)
    LINES.append(line)
