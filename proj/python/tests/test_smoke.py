"""Smoke tests for the Python bindings.

These are deliberately thin: the heavy verification lives in the C++ test
suite and the acceptance gate.  Here we check that every major entry point
is reachable from Python, that values round-trip across the boundary, and
that a couple of frozen numbers come out right.
"""

import cmath
import json
import math
import os
from pathlib import Path

import pytest

import gzkit


def data_dir() -> Path:
    env = os.environ.get("GZKIT_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "data"


def match_multisets(got, want, tol):
    """Greedy nearest-unused pairing; returns the largest match distance."""
    assert len(got) == len(want)
    remaining = list(want)
    worst = 0.0
    for g in got:
        best = min(range(len(remaining)), key=lambda i: abs(g - remaining[i]))
        worst = max(worst, abs(g - remaining[best]))
        del remaining[best]
    assert worst <= tol, f"multiset distance {worst} > {tol}"
    return worst


def test_scalar_arithmetic_and_round_trip():
    a = gzkit.Scalar.monomial(2 + 1j, gzkit.Rational(1, 2))
    b = gzkit.Scalar.parse("1,0 @ 0/1 + -3,0 @ 2/1")
    assert (a * b - b * a).is_zero()
    assert ((a + b) - b) == a
    assert gzkit.Scalar.parse(str(a)) == a
    assert a.valuation() == gzkit.Rational(1, 2)
    assert not a.is_laurent() and b.is_laurent()

    # series inverse: u * u^{-1} - 1 vanishes past the cutoff
    u = gzkit.Scalar(1.0) + gzkit.Scalar.monomial(2, gzkit.Rational(1))
    r = u * u.inverse() - gzkit.Scalar.one()
    assert r.is_zero() or r.valuation() > gzkit.Rational(10)

    # eval substitutes T^{lambda0} -> x
    assert a.eval(4.0) == pytest.approx(2 * (2 + 1j), abs=1e-15)

    with pytest.raises(ValueError):
        gzkit.Scalar().valuation()


def test_builtin_table_spectrum_idempotents():
    t = gzkit.builtin_quadric_table(3)
    assert t.dim() == 4 and t.basis.labels[0] == "1"
    assert gzkit.validate_table(t) == []

    # spectrum at T=1: three cube roots of 108 (= (3 xi)^3) plus one zero
    xi = 4.0 ** (1.0 / 3.0)
    want = [3 * xi * cmath.exp(2j * cmath.pi * k / 3) for k in range(3)] + [0]
    match_multisets(gzkit.c1_spectrum(t, 1.0), want, 1e-9)

    # coarse idempotents are exact idempotents summing to the unit
    ep = gzkit.coarse_idempotent(t, +1)
    em = gzkit.coarse_idempotent(t, -1)
    assert gzkit.multiply(t, ep, ep) == ep
    unit = t.unit_element()
    assert [x + y for x, y in zip(ep, em)] == unit
    assert all(c.is_zero() for c in gzkit.multiply(t, ep, em))

    dec = gzkit.primitive_idempotents(t, seed=7)
    assert dec.semisimple and dec.exact
    assert len(dec.labels) == 4  # three positive branches + e(-)
    grouping = gzkit.coarse_grouping(dec, t)
    assert sorted(set(grouping.values())) == ["e(+)", "e(-)"]


def test_critical_points_match_spectrum():
    t = gzkit.builtin_quadric_table(3)
    nonzero = [z for z in gzkit.c1_spectrum(t, 1.0) if abs(z) > 1e-8]
    points, stats = gzkit.find_critical_points(3, starts=120, seed=9)
    assert len(points) == 3 and stats.converged >= 3
    assert gzkit.spectrum_match_distance(points, nonzero) < 1e-8
    assert all(p.nondegenerate for p in points)
    # branch 0 is the real critical point (1, xi^{-2}, xi^{-1}), value 3*xi
    z0 = gzkit.closed_form_critical_point(3, 0)
    v0 = gzkit.closed_form_critical_value(3, 0)
    assert abs(gzkit.superpotential_value(3, z0) - v0) < 1e-12
    assert max(abs(g) for g in gzkit.superpotential_gradient(3, z0)) < 1e-12


def test_fibration_dual_route_and_lagrangian_levels():
    for z in gzkit.random_points(4, count=20, seed=11):
        a = gzkit.gz_closed(z)
        b = gzkit.gz_matrix(z)
        assert max(abs(x - y) for x, y in zip(a, b)) < 1e-10

    ustar = gzkit.monotone_fiber(3)
    assert ustar == pytest.approx([0.0, 2.0 / 3.0, 4.0 / 3.0])
    for p in gzkit.sample_torus(3, count=10, seed=3):
        vals = gzkit.gz_closed(p)
        assert max(abs(x - y) for x, y in zip(vals, ustar)) < 1e-8
    for p in gzkit.sample_sphere(3, count=10, seed=4):
        assert max(abs(v) for v in gzkit.gz_closed(p)) < 1e-10

    rep = gzkit.disjointness_gap(3, samples=50, seed=5)
    assert rep.passed and rep.min_gap >= rep.threshold


def test_disc_bundle_lift():
    zeta = 0.3 + 0.4j
    scale = 1 - abs(zeta) ** 2 / 2
    w = gzkit.random_points(2, count=1, seed=21)[0]
    z = gzkit.biran_lift(w, zeta)
    norm_res, quad_res = gzkit.quadric_residuals(z)
    assert norm_res < 1e-12 and quad_res < 1e-12
    base = gzkit.gz_closed(w)
    vals = gzkit.gz_closed(z)
    assert len(vals) == len(base) + 1
    for got, want in zip(vals, base):
        assert abs(got - want * scale) < 1e-9
    assert abs(vals[-1] - 2 * scale) < 1e-10


def test_degeneration_flow_short_run():
    z0 = gzkit.sample_torus(2, count=1, seed=8)[0]
    tr = gzkit.run_flow(z0, "torus", s_end=0.3)
    assert abs(tr.t_end - 0.7) < 1e-6
    assert tr.samples[0].s == 0 and tr.samples[-1].s == pytest.approx(0.3)
    assert max(s.t_dev for s in tr.samples) < 1e-6
    assert max(s.norm_residual for s in tr.samples) < 1e-9
    assert max(s.family_residual for s in tr.samples) < 1e-9
    # the n = 2 torus puts |z_4|^2 = 3/4, so the head carries 5/4 of |z|^2 = 2
    # and the distance to the critical locus {z_1 = z_2 = z_3 = 0} is sqrt(5/8)
    assert tr.samples[0].singular_distance == pytest.approx(
        math.sqrt(5 / 8), abs=1e-9
    )

    sph = gzkit.sample_sphere(2, count=1, seed=9)[0]
    tr2 = gzkit.run_flow(sph, "sphere", s_end=0.3)
    assert max(s.involution_residual for s in tr2.samples) < 1e-7


def test_quadric_separation_certificate():
    cert = gzkit.quadric_certificate(2, points=10, seed=13)
    assert cert.space == "Q2" and cert.separated
    assert cert.unit_value == pytest.approx(1.0, abs=1e-12)
    assert cert.norm_value == pytest.approx(1.0, abs=1e-12)
    assert cert.zeta["e(+)"] == pytest.approx(1.0)
    assert cert.zeta["e(-)"] == pytest.approx(0.0)
    assert all(p.distinct and abs(p.mu - 1) < 1e-12 for p in cert.pairs)
    assert "table" in cert.dependency_hashes
    body = json.loads(gzkit.certificate_to_json(cert))
    assert body["kind"] == "separation_certificate"


def test_ingested_blowup_table():
    path = data_dir() / "dp3.qht"
    if not path.exists():
        pytest.skip("ingested tables not shipped in this checkout")
    table, issues = gzkit.ingest_table(str(path))
    assert issues == [] and table.name == "dp3"
    dec = gzkit.primitive_idempotents(table, seed=5)
    assert dec.semisimple and len(dec.labels) == 6

    registry_path = data_dir() / "dp3_registry.json"
    if registry_path.exists():
        reg = gzkit.read_registry_json(str(registry_path))
        cert = gzkit.separation_certificate(reg)
        assert cert.separated and len(cert.pairs) == 3


def test_suite_runner_deterministic(tmp_path):
    cfg = gzkit.RunConfig()
    cfg.n_min, cfg.n_max = 1, 2
    cfg.newton_starts = 60
    cfg.gz_points = 8
    cfg.biran_pairs = 40
    cfg.flow_n_max = 0  # skip flows to keep the smoke test fast
    cfg.scalar_checks = 40
    cfg.seed = 5
    cfg.out_dir = str(tmp_path)

    rep = gzkit.run_suite(cfg)
    assert rep.passed and rep.failures == 0
    assert {c.status for c in rep.checks} <= {"pass", "skip"}

    body = json.loads(gzkit.suite_to_json(rep))
    assert body["kind"] == "suite_report"
    assert body["body_hash"] == rep.body_hash
    on_disk = json.loads((tmp_path / "suite_report.json").read_text())
    assert on_disk == body

    # same config, fresh run: byte-identical report
    rep2 = gzkit.run_suite(cfg)
    assert gzkit.suite_to_json(rep2) == gzkit.suite_to_json(rep)

    # config text parser round-trip
    parsed = gzkit.parse_run_config("n_min = 1\nn_max = 2\nseed = 5\n")
    assert (parsed.n_min, parsed.n_max, parsed.seed) == (1, 2, 5)
    with pytest.raises(ValueError, match="no_such_key"):
        gzkit.parse_run_config("no_such_key = 1\n")
