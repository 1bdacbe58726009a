"""Property checks run by ``qgstrip verify``.

Each check returns a :class:`CheckResult`; nothing here raises on a failed
property.  Decay checks on modes inside excluded windows are skipped, and
any failure is annotated with the distance of its momentum to the nearest
``n pi / l``, so breakdowns near those points are easy to attribute.
"""
import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.linalg

from .analysis import boundary_ratio, column_maxima, decay_report, probability_current
from .bands import dirichlet_distance, find_roots, is_excluded, theta_grid
from .coupling import cyclic_matrix, scattering, transmission_probabilities
from .secular import assemble, assemble_via_scattering, cell_norm_sq, edge_norm_sq, extract_modes
from .linalg import null_space


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def closed_form_s3(k):
    """Degree-3 scattering matrix written out in the variable eta = (1-k)/(1+k)."""
    eta = (1.0 - k) / (1.0 + k)
    diag = -eta / (1.0 + eta)
    pre = (1.0 + eta) / (1.0 + eta + eta ** 2)
    return pre * np.array([[diag, 1.0, eta], [eta, diag, 1.0], [1.0, eta, diag]], dtype=complex)


def check_unitarity():
    ks = np.logspace(-2, 4, 100)
    worst = 0.0
    for d in range(2, 8):
        u = cyclic_matrix(d)
        for k in ks:
            s = scattering(u, k).matrix
            worst = max(worst, np.linalg.norm(s @ s.conj().T - np.eye(d)))
    return CheckResult("S(k) unitary, d=2..7, k in [0.01, 1e4]", worst <= 1e-11, f"max dev {worst:.2e}")


def check_full_transmission_at_one():
    worst = max(np.max(np.abs(scattering(cyclic_matrix(d), 1.0).matrix - cyclic_matrix(d).matrix))
                for d in range(2, 8))
    return CheckResult("S(1) = U", worst <= 1e-14, f"max dev {worst:.2e}")


def check_closed_form(rng):
    u = cyclic_matrix(3)
    worst = max(np.max(np.abs(scattering(u, k).matrix - closed_form_s3(k)))
                for k in rng.uniform(1e-3, 100.0, 50))
    return CheckResult("degree-3 S(k) matches eta closed form", worst <= 1e-12, f"max dev {worst:.2e}")


def check_odd_limit():
    ks = 10.0 ** np.arange(1, 6)
    details, ok = [], True
    for d in (3, 5):
        u = cyclic_matrix(d)
        vals = [k * np.linalg.norm(scattering(u, k).matrix - np.eye(d)) for k in ks]
        ratios = [vals[i + 1] / vals[i] for i in range(1, len(vals) - 1)]
        ok &= all(0.5 <= r <= 2.0 for r in ratios)
        details.append(f"d={d}: k|S-I| = {vals[-1]:.3g}")
    return CheckResult("odd degree: k*|S(k)-I| bounded", ok, ", ".join(details))


def check_even_no_limit():
    u = cyclic_matrix(4)
    low = min(np.linalg.norm(scattering(u, k).matrix - np.eye(4)) for k in np.logspace(2, 6, 20))
    probs = transmission_probabilities(u, 1e6)
    dev = float(np.max(np.abs(probs - 0.25)))
    return CheckResult("d=4: S(k) does not tend to I; probabilities -> 1/4",
                       low >= 0.5 and dev <= 1e-3, f"min |S-I| {low:.3f}, max |p-1/4| {dev:.1e}")


def check_dual_formulation(model, k_min, k_max, n_theta=5):
    worst_dk, worst_angle, mismatch = 0.0, 0.0, 0
    for theta in theta_grid(n_theta if n_theta % 2 == 0 else n_theta + 1)[:n_theta]:
        direct = find_roots(model, theta, k_min, k_max)
        scat = find_roots(model, theta, k_min, k_max, assembler=assemble_via_scattering)
        if len(direct) != len(scat):
            mismatch += 1
            continue
        for k1, k2 in zip(direct, scat):
            worst_dk = max(worst_dk, abs(k1 - k2))
            a = np.array(null_space(assemble(model, k1, theta))).T
            b = np.array(null_space(assemble_via_scattering(model, k1, theta))).T
            if a.shape != b.shape or a.size == 0:
                mismatch += 1
                continue
            worst_angle = max(worst_angle, float(np.max(scipy.linalg.subspace_angles(a, b))))
    ok = mismatch == 0 and worst_dk <= 1e-6 and worst_angle <= 1e-8
    return CheckResult("direct and scattering secular matrices agree", ok,
                       f"max |dk| {worst_dk:.1e}, max angle {worst_angle:.1e}, mismatches {mismatch}")


def check_norm_quadrature(rng, count=100):
    worst = 0.0
    for _ in range(count):
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        k, length = rng.uniform(0.1, 20.0), rng.uniform(0.1, 3.0)
        f = lambda x: abs(a * np.exp(-1j * k * x) + b * np.exp(1j * k * x)) ** 2  # noqa: E731
        ref = scipy.integrate.quad(f, 0.0, length, limit=400, epsabs=1e-13, epsrel=1e-13)[0]
        worst = max(worst, abs(edge_norm_sq(a, b, k, length) - ref))
    return CheckResult("edge norm closed form vs quadrature", worst <= 1e-10, f"max dev {worst:.1e}")


def _attribution(k, model):
    dist, length, n = dirichlet_distance(k, model.lengths)
    return f"k={k:.6f} is {dist:.3g} from {n}*pi/{length:.6g} (excluded for K>{dist:.3g})"


def check_decay(model, k_min, k_max, exclusion_k):
    """Bulk suppression (rect) or per-column decay (brick) at theta = 0 band edges."""
    failures, checked, skipped = [], 0, 0
    for k in find_roots(model, 0.0, k_min, k_max):
        if exclusion_k > 0 and is_excluded(k, model.lengths, exclusion_k):
            skipped += 1
            continue
        for mode in extract_modes(model, k, 0.0):
            checked += 1
            if model.name == "rect":
                r = boundary_ratio(mode, model)
                if r > 0.1:
                    failures.append(f"ratio {r:.2g} at {_attribution(k, model)}")
            else:
                m = [v for _, v in column_maxima(mode, model)]
                worst = max(m[j + 1] / m[j] for j in range(len(m) - 1))
                if worst > 0.1:
                    failures.append(f"column ratio {worst:.2g} at {_attribution(k, model)}")
    name = ("boundary edge norms <= 0.1 x interior" if model.name == "rect"
            else "column maxima drop by >= 10x per column")
    detail = f"{checked} modes checked, {skipped} flagged and skipped"
    if failures:
        detail += "; " + "; ".join(failures)
    return CheckResult(name, not failures and checked > 0, detail)


def check_mode_invariants(model, k_min, k_max):
    worst_norm, worst_res, worst_cur = 0.0, 0.0, 0.0
    count = 0
    for k in find_roots(model, 0.0, k_min, k_max):
        for mode in extract_modes(model, k, 0.0):
            count += 1
            worst_norm = max(worst_norm, abs(cell_norm_sq(model, mode.coeffs, mode.k) - 1.0))
            worst_res = max(worst_res, mode.residual)
            rep = decay_report(mode, model)
            for r in rep.records:
                if r.sum_sq > 0:
                    worst_cur = max(worst_cur, abs(probability_current(mode, r.edge_id)))
                if r.flux_sq > r.sum_sq * (1 + 1e-12):
                    worst_cur = math.inf
    ok = count > 0 and worst_norm <= 1e-10 and worst_res <= 1e-6 and worst_cur <= 1.0
    return CheckResult("mode normalization, residual, |current| <= 1", ok,
                       f"{count} modes, norm dev {worst_norm:.1e}, residual {worst_res:.1e}")


def run_verification(config):
    """Run every property check for ``config``; returns a list of :class:`CheckResult`."""
    rng = np.random.default_rng(config.seed)
    model = config.build_model()
    return [
        check_unitarity(),
        check_full_transmission_at_one(),
        check_closed_form(rng),
        check_odd_limit(),
        check_even_no_limit(),
        check_norm_quadrature(rng),
        check_dual_formulation(model, config.k_min, config.k_max),
        check_mode_invariants(model, config.k_min, config.k_max),
        check_decay(model, config.k_min, config.k_max, config.exclusion_k),
    ]
