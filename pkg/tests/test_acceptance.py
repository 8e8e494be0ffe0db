"""Acceptance criteria, one test per claim, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or as a script.
"""

import pytest

from cealg.claims import CLAIMS, PASS, ClaimContext, run_claim


@pytest.fixture(scope="module")
def ctx():
    # shared so the claim reusing campaign trials sees the same reports
    return ClaimContext()


@pytest.mark.parametrize("claim", CLAIMS, ids=[c.claim_id for c in CLAIMS])
def test_claim(claim, ctx, capsys):
    res = run_claim(claim, ctx)
    with capsys.disabled():
        print(f"\n[{res.status}] {claim.claim_id} {claim.anchor} ({res.seconds:.1f}s): {res.detail}")
    assert res.status == PASS, res.detail


if __name__ == "__main__":
    context = ClaimContext()
    results = [(c, run_claim(c, context)) for c in CLAIMS]
    for c, r in results:
        print(f"[{r.status}] {c.claim_id} {c.anchor} ({r.seconds:.1f}s): {r.detail}")
    raise SystemExit(0 if all(r.status == PASS for _, r in results) else 1)
