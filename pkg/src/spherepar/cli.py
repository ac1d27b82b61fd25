"""Command-line runner: ``spherepar verify | eval | embed``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config
error, 3 symbolic budget refused.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import frames as fr
from . import hopf, identities, kervaire
from .geometry import FrameKind, GeometryError, ProductPoint, sample_points
from .polybracket import CompiledField, numeric_bracket
from .report import FAIL, PASS, CheckRecord, VerificationReport, dumps

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DUALITY_TOL = 1e-12
CHANGE_TOL = 1e-12
PERM_TOL = 1e-12
PUSHED_TOL = 1e-12
FD_TOL = 1e-6
ROUNDTRIP_TOL = 1e-9


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    frame: str
    m: int
    n: int
    samples: int = 1000
    seed: int = 42
    tol: float = 1e-9
    symbolic: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise UsageError("samples must be >= 1")
        if not self.tol > 0:
            raise UsageError("tolerance must be > 0")
        if self.m < 1 or self.n < 1:
            raise UsageError("m and n must be >= 1")
        if self.n % 2 == 0:
            raise UsageError(f"n={self.n} is even; parallelizations here need odd n")
        self.kind  # validates frame/parity

    @property
    def kind(self) -> FrameKind:
        f = self.frame.upper()
        if f == "B":
            if self.n == 1:
                return FrameKind.B_S1
            if self.n == 3:
                return FrameKind.B_S3
            raise UsageError(f"frame B has a closed form only for n in (1, 3), got n={self.n}")
        try:
            kind = FrameKind(f)
        except ValueError:
            raise UsageError(f"unknown frame {self.frame!r}") from None
        try:
            identities.check_compatible(kind, self.m, self.n)
        except GeometryError as exc:
            raise UsageError(str(exc)) from None
        return kind


def _record(report, cid, tag, resid, tol, t0, **detail):
    report.add(
        CheckRecord(
            id=cid,
            paper_tag=tag,
            status=PASS if resid < tol else FAIL,
            residual=float(resid),
            ms=(time.perf_counter() - t0) * 1e3,
            detail=detail,
        )
    )


def _frame_checks(cfg: RunConfig, kind: FrameKind, points, report):
    t0 = time.perf_counter()
    ortho = tang = dual = closed = 0.0
    for pt in points:
        f = fr.build_frame(kind, pt)
        ortho = max(ortho, f.orthonormality_residual())
        tang = max(tang, f.tangency_residual())
        cf = fr.coframe(f)
        dual = max(dual, float(np.max(np.abs(cf.pairing(f) - np.eye(len(f))))))
        if kind is not FrameKind.P or cfg.n in (1, 3):
            cc = fr.closed_form_coframe(kind, pt)
            closed = max(closed, float(np.max(np.abs(cc.pairing(f) - np.eye(len(f))))))
    tag = {FrameKind.B_S1: "progeofor", FrameKind.B_S3: "parsms3", FrameKind.P: "frame"}[kind]
    _record(report, f"orthonormality/{kind.value}", tag, ortho, cfg.tol, t0)
    _record(report, f"tangency/{kind.value}", tag, tang, DUALITY_TOL, t0)
    _record(report, f"coframe_duality/{kind.value}", tag, dual, DUALITY_TOL, t0)
    if kind is not FrameKind.P or cfg.n in (1, 3):
        ctag = {FrameKind.B_S1: "cobruni1", FrameKind.B_S3: "cobruni3"}.get(
            kind, "changebtop" if cfg.n == 1 else "changebtop3"
        )
        _record(report, f"coframe_closed_form/{kind.value}", ctag, closed, DUALITY_TOL, t0)


def _change_of_basis_checks(cfg: RunConfig, points, report):
    t0 = time.perf_counter()
    resid = orth = 0.0
    for pt in points:
        a = fr.change_of_basis(pt, cfg.n)
        resid = max(resid, float(np.max(np.abs(fr.frame_P(pt).matrix - fr.frame_B(pt).matrix @ a.matrix))))
        orth = max(orth, a.orthogonality_residual())
    tag = "changebtop" if cfg.n == 1 else "changebtop3"
    _record(report, f"change_of_basis/P=BA/n={cfg.n}", tag, resid, CHANGE_TOL, t0)
    _record(report, f"change_of_basis/AAt=I/n={cfg.n}", tag, orth, CHANGE_TOL, t0)


def _chain_checks(cfg: RunConfig, points, report):
    t0 = time.perf_counter()
    pull = iso = 0.0
    for pt in points:
        ch = fr.chain_isomorphism(pt)
        p = fr.frame_P(pt)
        pull = max(pull, float(np.max(np.abs(ch.pulled_back_basis().matrix - p.matrix))))
        fwd = ch.matrix() @ p.matrix
        iso = max(iso, float(np.max(np.abs(fwd - np.eye(fwd.shape[0])))))
    _record(report, "chain/pullback=P", "frameb", pull, DUALITY_TOL, t0)
    _record(report, "chain/isometry", "chainlinear", iso, cfg.tol, t0)


def _hopf_checks(cfg: RunConfig, report):
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    fd = pushed = 0.0
    count = min(cfg.samples, 200)
    for _ in range(count):
        d = rng.standard_normal(cfg.m + 1)
        x = d / np.linalg.norm(d) * rng.uniform(0.5, 2.0)
        fd = max(fd, float(np.max(np.abs(hopf.finite_difference_jacobian(x) - hopf.pushforward_matrix(x)))))
        pushed = max(pushed, float(np.max(np.abs(hopf.pushed_frame(x).matrix - fr.frame_B_s1(hopf.project(x)).matrix))))
    _record(report, "hopf/pushforward_fd", "p_*", fd, FD_TOL, t0)
    _record(report, "hopf/pushed_frame=B", "progeofor", pushed, PUSHED_TOL, t0)
    t0 = time.perf_counter()
    perm = 0.0
    for pt in sample_points(cfg.m, 1, min(cfg.samples, 100), cfg.seed + 1):
        pi = tuple(rng.permutation(cfg.m + 1) + 1)
        perm = max(perm, hopf.permutation_residual(pi, pt))
    _record(report, "hopf/permutation_lemma", "lemgen", perm, PERM_TOL, t0)


def _symbolic_checks(cfg: RunConfig, kind: FrameKind, report):
    report.extend(identities.verify_antisymmetry(kind, cfg.m, cfg.n))
    report.extend(identities.verify_closed_tangency(kind, cfg.m, cfg.n))
    report.extend(identities.verify_polynomial_identities(cfg.m, cfg.n))
    if cfg.n in (1, 3):
        report.extend(identities.verify_change_of_basis_exact(cfg.m, cfg.n))
    if kind is FrameKind.P and cfg.n == 1:
        report.extend(identities.verify_specialization(cfg.m))


def run_verify(cfg: RunConfig) -> VerificationReport:
    kind = cfg.kind
    if cfg.symbolic:
        identities.check_budget(kind, cfg.m, cfg.n)
    points = sample_points(cfg.m, cfg.n, cfg.samples, cfg.seed)
    report = VerificationReport(config={k: v for k, v in asdict(cfg).items() if k != "out"} | {"kind": kind.value})
    _frame_checks(cfg, kind, points, report)
    if kind is not FrameKind.P or cfg.n == 1:
        report.extend(identities.verify_auxiliary_form(kind, cfg.m, cfg.n, cfg.samples, cfg.seed))
    report.extend(
        identities.verify_bracket_table(
            kind, cfg.m, cfg.n, symbolic=cfg.symbolic, samples=cfg.samples, seed=cfg.seed, tol=cfg.tol
        )
    )
    report.extend(identities.verify_structure_equations(kind, cfg.m, cfg.n, cfg.samples, cfg.seed, cfg.tol))
    if cfg.n in (1, 3):
        _change_of_basis_checks(cfg, points, report)
    if kind is FrameKind.P:
        _chain_checks(cfg, points, report)
    if cfg.n == 1:
        _hopf_checks(cfg, report)
    if cfg.symbolic:
        _symbolic_checks(cfg, kind, report)
    return report


# point input ---------------------------------------------------------------------


def parse_point_text(text: str, m: int, n: int, source: str = "<input>") -> ProductPoint:
    """Whitespace-separated decimals: first m+1 are x, next n+1 are y."""
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for tok in line.split():
            try:
                values.append(float(tok))
            except ValueError:
                raise UsageError(f"{source}:{lineno}: cannot parse {tok!r} as a number") from None
    need = m + n + 2
    if len(values) != need:
        raise UsageError(f"{source}: expected {need} numbers (m+1 for x, n+1 for y), got {len(values)}")
    try:
        return ProductPoint.from_coords(values[: m + 1], values[m + 1 :])
    except GeometryError as exc:
        raise UsageError(f"{source}: {exc}") from None


def _floats(s: str) -> list[float]:
    try:
        return [float(v) for v in s.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"cannot parse {s!r} as a list of numbers") from None


def run_eval(kind: FrameKind, point: ProductPoint, bracket=None, show_coframe=False) -> dict:
    f = fr.build_frame(kind, point)
    out = {
        "kind": kind.value,
        "point": {"x": point.x.coords.tolist(), "y": point.y.coords.tolist()},
        "frame": [v.stacked().tolist() for v in f.vectors],
        "gram_residual": f.orthonormality_residual(),
    }
    if show_coframe:
        out["coframe"] = [c.stacked().tolist() for c in fr.coframe(f).covectors]
    if bracket is not None:
        i, j = bracket
        size = len(f)
        if not (1 <= i <= size and 1 <= j <= size):
            raise UsageError(f"bracket indices must lie in 1..{size}")
        pts = point.stacked()[None, :]
        closed = identities.closed_bracket(kind, i, j, point.m, point.n)
        closed_val = CompiledField(closed).evaluate(pts)[0]
        fields = identities._frame(kind, point.m, point.n)
        num = numeric_bracket(CompiledField(fields[i - 1]), CompiledField(fields[j - 1]), pts)[0]
        out["bracket"] = {
            "i": i,
            "j": j,
            "closed_form": closed_val.tolist(),
            "frame_coefficients": (f.matrix.T @ num).tolist(),
            "residual": float(np.max(np.abs(num - closed_val))),
        }
    return out


def run_embed(dims, samples: int, seed: int) -> VerificationReport:
    spec = kervaire.EmbeddingSpec(tuple(dims))
    report = VerificationReport(config={"dims": list(spec.dims), "samples": samples, "seed": seed,
                                        "shifts": list(spec.shifts)})
    t0 = time.perf_counter()
    rt = 0.0
    ranks = set()
    floor = float("inf")
    outdim_ok = True
    for p in kervaire.sample_multi(spec.dims, samples, seed):
        img = kervaire.embed(spec, p)
        outdim_ok &= img.size == spec.output_dim
        back = kervaire.embed_inverse(spec, img)
        rt = max(rt, max(float(np.max(np.abs(a.coords - b.coords))) for a, b in zip(p.factors, back.factors)))
        ranks.add(kervaire.immersion_rank(spec, p))
        floor = min(floor, min(kervaire.entering_first_coordinates(spec, p)))
    expected = sum(spec.dims)
    _record(report, "kervaire/roundtrip", "embedding", rt, ROUNDTRIP_TOL, t0)
    report.add(CheckRecord("kervaire/rank", "embedding", PASS if ranks == {expected} else FAIL,
                           detail={"expected": expected, "observed": sorted(ranks)}))
    report.add(CheckRecord("kervaire/output_dim", "embedding", PASS if outdim_ok else FAIL,
                           detail={"expected": expected + 1}))
    report.add(CheckRecord("kervaire/shift_floor", "embedding", PASS if floor >= 1 else FAIL, residual=floor))
    return report


# argument parsing ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spherepar", description="Explicit parallelizations of S^m x S^n.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite for one frame")
    v.add_argument("--frame", required=True, help="B, B_S1, B_S3 or P")
    v.add_argument("--m", type=int, required=True)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--symbolic", action="store_true", help="also prove identities exactly")
    v.add_argument("--out", help="write the JSON report here instead of stdout")
    v.add_argument("--text", action="store_true", help="print a text summary instead of JSON")
    v.add_argument("--timings", action="store_true", help="include per-check milliseconds (not reproducible)")

    e = sub.add_parser("eval", help="evaluate a frame at one point")
    e.add_argument("--frame", required=True)
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--x", help="comma or space separated x coordinates")
    e.add_argument("--y", help="comma or space separated y coordinates")
    e.add_argument("--point-file", help="file with m+1 x values then n+1 y values")
    e.add_argument("--coframe", action="store_true")
    e.add_argument("--bracket", nargs=2, type=int, metavar=("I", "J"))

    k = sub.add_parser("embed", help="check the recursive product-of-spheres embedding")
    k.add_argument("--dims", required=True, help="comma separated sphere dimensions, e.g. 2,3")
    k.add_argument("--samples", type=int, default=200)
    k.add_argument("--seed", type=int, default=42)
    k.add_argument("--out")
    k.add_argument("--text", action="store_true")
    return ap


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _cmd_verify(args) -> int:
    cfg = RunConfig(args.frame, args.m, args.n, args.samples, args.seed, args.tol, args.symbolic, args.out)
    report = run_verify(cfg)
    _emit(report.to_text() if args.text else report.to_json(timings=args.timings), cfg.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def _cmd_eval(args) -> int:
    cfg = RunConfig(args.frame, args.m, args.n, samples=1)
    if args.point_file:
        try:
            with open(args.point_file) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(str(exc)) from None
        point = parse_point_text(text, cfg.m, cfg.n, args.point_file)
    elif args.x is not None and args.y is not None:
        point = parse_point_text(" ".join(map(str, _floats(args.x) + _floats(args.y))), cfg.m, cfg.n, "--x/--y")
    else:
        raise UsageError("give --x and --y, or --point-file")
    result = run_eval(cfg.kind, point, tuple(args.bracket) if args.bracket else None, args.coframe)
    _emit(dumps(result), None)
    return EXIT_OK


def _cmd_embed(args) -> int:
    try:
        dims = [int(d) for d in args.dims.split(",") if d.strip()]
    except ValueError:
        raise UsageError(f"cannot parse --dims {args.dims!r}") from None
    if not dims:
        raise UsageError("--dims must list at least one dimension")
    if args.samples < 1:
        raise UsageError("samples must be >= 1")
    report = run_embed(dims, args.samples, args.seed)
    _emit(report.to_text() if args.text else report.to_json(), args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"verify": _cmd_verify, "eval": _cmd_eval, "embed": _cmd_embed}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"spherepar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except identities.BudgetExceeded as exc:
        print(f"spherepar: budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GeometryError as exc:
        print(f"spherepar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
