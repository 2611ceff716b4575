"""Independent checkers that report, never raise.

Every section records the numbers it measured, the tolerances it used and a verdict
that can be re-derived from those numbers alone.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import herm, herm_residual, lambda_min, norm2, numerical_rank, relative, skew_residual, struct_tol
from .exceptions import PHMORError, SingularResolvent
from .reduction import TOL_INTERP, ReductionResult
from .system import PHSystem, StateSpace, audit_tolerance, energy_audit, simulate


@dataclass
class Section:
    name: str
    passed: object  # True, False, or None when skipped
    tolerances: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    def to_dict(self):
        return {"passed": self.passed, "tolerances": self.tolerances, **self.data}


@dataclass
class VerificationReport:
    sections: dict = field(default_factory=dict)

    def add(self, section):
        self.sections[section.name] = section
        return section

    @property
    def verdict(self):
        return {name: sec.passed for name, sec in self.sections.items()}

    @property
    def passed(self):
        return all(sec.passed is not False for sec in self.sections.values())

    def to_dict(self):
        return {
            "passed": self.passed,
            "verdict": self.verdict,
            "sections": {name: sec.to_dict() for name, sec in self.sections.items()},
        }

    def to_json(self, path=None, indent=2):
        text = json.dumps(_jsonable(self.to_dict()), indent=indent)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_jsonable(obj.real), _jsonable(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def check_ph_structure(J, R, H, B=None, C=None, tol=None):
    """Audit pH-shaped matrices.

    Records ``||J + J*||/||J||``, ``||R - R*||/||R||``, ``lambda_min(R)``,
    ``||H - H*||/||H||``, ``lambda_min(H)``, ``rank(J)`` and, when ``C`` is given, the
    collocation residual ``||C - B* H|| / ||C||``. Passes iff every residual is within
    ``tol``, ``lambda_min(H) > 0`` and ``lambda_min(R) >= -tol ||R||``.
    """
    J, R, H = (np.asarray(a, dtype=np.complex128) for a in (J, R, H))
    dim = J.shape[0]
    tol = struct_tol(dim) if tol is None else tol
    data = {
        "dim": dim,
        "skew_J": skew_residual(J),
        "herm_R": herm_residual(R),
        "lambda_min_R": lambda_min(R),
        "norm_R": norm2(R),
        "herm_H": herm_residual(H),
        "lambda_min_H": lambda_min(H),
        "rank_J": numerical_rank(J),
    }
    checks = {
        "skew_J": data["skew_J"] <= tol,
        "herm_R": data["herm_R"] <= tol,
        "psd_R": data["lambda_min_R"] >= -tol * data["norm_R"],
        "herm_H": data["herm_H"] <= tol,
        "pd_H": data["lambda_min_H"] > 0,
        "rank_J": data["rank_J"] == dim,
    }
    if C is not None:
        B, C = np.asarray(B, dtype=np.complex128), np.asarray(C, dtype=np.complex128)
        data["collocation"] = relative(norm2(C - B.conj().T @ H), norm2(C))
        checks["collocation"] = data["collocation"] <= tol
    checks = {k: bool(v) for k, v in checks.items()}
    data["checks"] = checks
    return Section("structure", all(checks.values()), {"tol": tol}, data)


def baseline_ph_view(full, result):
    """pH-shaped view of an unstructured reduction.

    The candidate energy is the one carried by the reduced coordinates,
    ``H_r = V* H V``; ``J_r`` and ``-R_r`` are the skew and Hermitian parts of
    ``A_r H_r^{-1}``. A genuine pH realization would also satisfy ``C_r = B_r* H_r``.
    """
    V = result.lift
    H_r = herm(V.conj().T @ full.H @ V)
    M = np.linalg.solve(H_r.T, result.reduced.A.T).T
    J_r = 0.5 * (M - M.conj().T)
    R_r = -herm(M)
    return {"J": J_r, "R": R_r, "H": H_r, "B": result.reduced.B, "C": result.reduced.C}


def structure_section(obj, full=None, tol=None):
    """Structure audit of a :class:`PHSystem` or :class:`ReductionResult`."""
    if isinstance(obj, ReductionResult):
        if obj.method == "baseline":
            if full is None:
                return Section("structure", False, {}, {"reason": "baseline result needs the full system"})
            return check_ph_structure(**baseline_ph_view(full, obj), tol=tol)
        obj = obj.reduced
    if isinstance(obj, StateSpace):
        return Section("structure", False, {}, {"reason": "no port-Hamiltonian realization"})
    return check_ph_structure(obj.J, obj.R, obj.H, tol=tol)


def _model(obj):
    return obj.reduced if isinstance(obj, ReductionResult) else obj


def positive_real_sweep(obj, omegas, tol=None, rel_tol=1e-10):
    """Sample ``lambda_min(G(i w) + G(i w)*)`` on a real frequency grid.

    Grid points where ``i w`` is (numerically) a pole are skipped and listed.
    The default tolerance is ``rel_tol * max_w ||G(i w)||``.
    """
    model = _model(obj)
    lam, norms, used, skipped = [], [], [], []
    for w in np.asarray(omegas, dtype=float):
        try:
            G = model.transfer_matrix(1j * w)
        except SingularResolvent:
            skipped.append(float(w))
            continue
        lam.append(float(np.linalg.eigvalsh(herm(G))[0] * 2.0))
        norms.append(norm2(G))
        used.append(float(w))
    scale = max(norms) if norms else 0.0
    tol_pr = rel_tol * scale if tol is None else tol
    worst = min(lam) if lam else float("nan")
    passed = bool(lam) and worst >= -tol_pr
    data = {"omegas": used, "lambda_min": lam, "min_lambda": worst, "max_norm": scale, "skipped": skipped}
    return Section("pr_sweep", passed, {"tol_pr": tol_pr}, data)


def _independent_eval(model, s, u):
    A = model.A
    x = np.linalg.solve(s * np.eye(A.shape[0]) - A, model.B @ u)
    y = model.C @ x
    if isinstance(model, StateSpace):
        y = y + model.D @ u
    return y


def interpolation_report(full, result, interp=None, tol=TOL_INTERP):
    """Recompute ``G(s_m) u_m`` and ``G_r(s_m) u_m`` from scratch and compare."""
    interp = result.interp if interp is None else interp
    reduced = _model(result)
    absr, relr, points = [], [], []
    for s, u in interp:
        points.append(complex(s))
        try:
            y = _independent_eval(full, s, u)
            yr = _independent_eval(reduced, s, u)
        except np.linalg.LinAlgError:
            absr.append(float("inf"))
            relr.append(float("inf"))
            continue
        err = norm2(y - yr)
        absr.append(err)
        relr.append(relative(err, norm2(y)))
    passed = bool(np.all(np.asarray(relr) <= tol))
    data = {"points": points, "abs_error": absr, "rel_error": relr, "max_rel_error": float(np.max(relr))}
    return Section("interpolation", passed, {"rel_tol": tol}, data)


@dataclass
class SweepTable:
    """Frequency response comparison; columns ``omega, |G|, |G_r|, |G - G_r|`` (spectral norms)."""

    omega: np.ndarray
    norm_full: np.ndarray
    norm_reduced: np.ndarray
    error: np.ndarray

    HEADER = ("omega", "norm_G", "norm_Gr", "norm_err")

    @property
    def max_error(self):
        finite = self.error[np.isfinite(self.error)]
        return float(np.max(finite)) if finite.size else float("nan")

    def rows(self):
        return np.column_stack([self.omega, self.norm_full, self.norm_reduced, self.error])

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.HEADER)
            for row in self.rows():
                writer.writerow([f"{v:.16e}" for v in row])


def frequency_sweep(full, reduced, omegas):
    """Compare ``G(i w)`` and ``G_r(i w)`` on a grid; pole hits give NaN rows."""
    full, reduced = _model(full), _model(reduced)
    omegas = np.asarray(omegas, dtype=float)
    out = np.full((len(omegas), 3), np.nan)
    for i, w in enumerate(omegas):
        try:
            G = full.transfer_matrix(1j * w)
            Gr = reduced.transfer_matrix(1j * w)
        except SingularResolvent:
            continue
        out[i] = norm2(G), norm2(Gr), norm2(G - Gr)
    return SweepTable(omegas, out[:, 0], out[:, 1], out[:, 2])


def log_grid(w_min=1e-2, w_max=1e2, points_per_decade=50):
    """Logarithmic frequency grid with ``round(decades * points_per_decade)`` points."""
    decades = math.log10(w_max / w_min)
    num = max(2, int(round(decades * points_per_decade)))
    return np.logspace(math.log10(w_min), math.log10(w_max), num)


def energy_section(sys, dt=1e-3, steps=10000, input_signal=None, x0=None):
    """Simulate (unit step into every port by default) and audit the dissipation inequality."""
    if isinstance(sys, ReductionResult):
        sys = sys.reduced
    if not isinstance(sys, PHSystem):
        return Section("energy", None, {}, {"reason": "no port-Hamiltonian realization; skipped"})
    if input_signal is None:
        input_signal = np.ones((steps + 1, sys.p))
    x0 = np.zeros(sys.dim) if x0 is None else x0
    try:
        traj = simulate(sys, input_signal, x0, dt, steps)
    except PHMORError as exc:
        return Section("energy", False, {}, {"reason": str(exc)})
    slack = energy_audit(traj)
    tau = audit_tolerance(traj, sys)
    data = {"slack": slack, "dt": dt, "steps": steps, "H_start": traj.energies[0], "H_end": traj.energies[-1]}
    return Section("energy", bool(slack >= -tau), {"tau_audit": tau}, data)


def verify(full, result, omegas=None, dt=1e-3, steps=10000, tol_struct=None, tol_interp=TOL_INTERP, tol_pr=None):
    """Run all sections on a reduction result."""
    report = VerificationReport()
    report.add(structure_section(result, full=full, tol=tol_struct))
    report.add(interpolation_report(full, result, tol=tol_interp))
    report.add(positive_real_sweep(result, log_grid() if omegas is None else omegas, tol=tol_pr))
    report.add(energy_section(result, dt=dt, steps=steps))
    return report
