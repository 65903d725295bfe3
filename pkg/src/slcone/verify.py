"""Reference data for the Harvey-Lawson cones and a self-check battery."""

from __future__ import annotations

from dataclasses import dataclass

from .spectrum import ConeDescriptor, StabilityReport, stability_index

# m -> (N(2), m(2), s-ind), published for 3 <= m <= 12
HL_TABLE = {
    3: (13, 6, 0),
    4: (27, 12, 6),
    5: (51, 20, 20),
    6: (93, 30, 50),
    7: (169, 42, 112),
    8: (311, 126, 238),
    9: (331, 240, 240),
    10: (201, 90, 90),
    11: (243, 110, 110),
    12: (289, 132, 132),
}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (
            f"  [{self.detail}]" if self.detail else ""
        )


def hl_row(m: int, *, threads: int = 1, max_points: int | None = None) -> StabilityReport:
    return stability_index(
        ConeDescriptor.harvey_lawson(m, threads=threads, max_points=max_points)
    )


def run_battery(m_max: int, *, threads: int = 1, max_points: int | None = None) -> list[Check]:
    if m_max < 3:
        raise ValueError(f"m_max must be >= 3, got {m_max}")
    reports = {
        m: hl_row(m, threads=threads, max_points=max_points)
        for m in range(3, m_max + 1)
    }
    checks = []
    for m, r in reports.items():
        got = (r.N2, r.m2, r.s_ind)
        if m in HL_TABLE:
            want = HL_TABLE[m]
            checks.append(Check(f"table row m={m}", got == want, f"got {got}, want {want}"))
        if m >= 10:
            want = (2 * m * m + 1, m * m - m, m * m - m)
            checks.append(
                Check(f"closed form m={m}", got == want, f"got {got}, want {want}")
            )
        checks.append(
            Check(f"m(0)=1, m(1)=2m at m={m}", r.m0 == 1 and r.m1 == 2 * m,
                  f"m(0)={r.m0}, m(1)={r.m1}")
        )
        checks.append(
            Check(f"lower bounds m={m}", not r.bound_violations,
                  "; ".join(r.bound_violations))
        )
        checks.append(Check(f"s-ind >= 0 at m={m}", r.s_ind >= 0, f"s-ind={r.s_ind}"))
        checks.append(Check(f"stable => rigid at m={m}", r.rigid or not r.stable))
    stable = [m for m, r in reports.items() if r.stable]
    checks.append(Check("stable exactly at m=3", stable == [3], f"stable at {stable}"))
    nonrigid = [m for m, r in reports.items() if not r.rigid]
    want = [m for m in (8, 9) if m <= m_max]
    checks.append(
        Check("rigid exactly for m != 8, 9", nonrigid == want, f"non-rigid at {nonrigid}")
    )
    return checks
