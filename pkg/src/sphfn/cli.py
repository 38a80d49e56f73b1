"""Command line interface.

Subcommands:
  eval         evaluate phi_xi over a list of points, write CSV
  verify       run a named check suite (functional, eigen, posdef,
               equivalence, crossgroup) and report pass/fail lines
  transform    spherical transform of a profile at several xi, write CSV
  fingerprint  invariant fingerprint of one or two xi, write JSON

Exit codes: 0 success, 1 a check failed, 2 configuration error,
3 runtime/evaluation error.  Every output file is paired with a
<file>.manifest.json recording the tool version, the exact config, the
wall-clock duration, and the output file hash.  Data outputs themselves
are deterministic: the same config and seed produce byte-identical CSV
regardless of thread count.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .bessel import closed_form_spherical
from .errors import ConfigError, SphfnError
from .evaluate import (
    METHOD_CLOSED_FORM,
    EvalConfig,
    SpectralParam,
    eigen_check,
    eval_spherical,
    verify_functional_equation,
)
from .groups import GroupSpec, build_group
from .invariants import equivalent, fingerprint, separation_probe
from .motions import MotionElement
from .posdef import (
    VERDICT_CONSISTENT,
    VERDICT_VIOLATED,
    GridFunction,
    RadialProfile,
    gram_matrix,
    posdef_verdict,
    spherical_transform,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return data


def _eval_config_from(cfg: dict, args) -> EvalConfig:
    base = EvalConfig.from_json(cfg.get("eval", {}))
    updates = {}
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "samples", None) is not None:
        updates["samples"] = args.samples
    if getattr(args, "tol", None) is not None:
        updates["tol"] = args.tol
    if updates:
        base = EvalConfig(
            samples=updates.get("samples", base.samples),
            seed=updates.get("seed", base.seed),
            quadrature_nodes=base.quadrature_nodes,
            tol=updates.get("tol", base.tol),
        )
    return base


def _spectral_from(data, n: int) -> SpectralParam:
    param = SpectralParam.from_json(data)
    if param.dim != n:
        raise ConfigError(f"xi has {param.dim} components, the group acts on R^{n}")
    return param


def _write_manifest(out_path: str, subcommand: str, config: dict,
                    started: float, extra: dict | None = None):
    with open(out_path, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    manifest = {
        "tool": "sphfn",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "duration_seconds": round(time.perf_counter() - started, 6),
        "output": {"path": out_path, "sha256": digest},
    }
    if extra:
        manifest.update(extra)
    with open(out_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit_error(kind: str, message: str):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


# ---------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------


def cmd_eval(args) -> int:
    started = time.perf_counter()
    cfg = _load_config(args.config)
    spec = GroupSpec.from_json(cfg.get("group", {}))
    handle = build_group(spec)
    xi = _spectral_from(cfg.get("xi", []), handle.n)
    points = np.atleast_2d(np.asarray(cfg.get("points", []), dtype=float))
    if points.size == 0:
        raise ConfigError("config needs a non-empty 'points' list")
    if points.shape[1] != handle.n:
        raise ConfigError(f"points have {points.shape[1]} coordinates, expected {handle.n}")
    econf = _eval_config_from(cfg, args)
    method = cfg.get("method", "auto")
    if args.method is not None:
        method = args.method
    if method == "auto" and handle.is_sphere_transitive and handle.elements is None \
            and handle.torus_blocks is None:
        method = METHOD_CLOSED_FORM

    def one(idx: int):
        # per-point derived seed keeps Monte Carlo runs thread-count independent
        local = EvalConfig(
            samples=econf.samples,
            seed=econf.seed ^ idx,
            quadrature_nodes=econf.quadrature_nodes,
            tol=econf.tol,
        )
        return idx, eval_spherical(handle, xi, points[idx], local, method=method)

    threads = max(1, args.threads)
    if threads == 1:
        results = [one(i) for i in range(len(points))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(len(points))))
    results.sort(key=lambda pair: pair[0])

    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["index"]
            + [f"x_{i}" for i in range(handle.n)]
            + ["value_re", "value_im", "stderr", "method"]
        )
        for idx, res in results:
            writer.writerow(
                [idx]
                + [_fmt(v) for v in points[idx]]
                + [_fmt(res.value.real), _fmt(res.value.imag), _fmt(res.stderr), res.method]
            )
    _write_manifest(args.out, "eval", cfg, started, {"threads": threads, "method": method})
    print(f"wrote {args.out} ({len(points)} points)")
    return EXIT_OK


# ---------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------

_C4_GENS = [[[0.0, -1.0], [1.0, 0.0]]]
_D8_GENS = [[[0.0, -1.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, -1.0]]]


def _default_functional_config() -> dict:
    return {
        "groups": [
            {"kind": "finite", "generators": _C4_GENS},
            {"kind": "finite", "generators": _D8_GENS},
        ],
        "trials": 50,
        "seed": 2024,
        "xi_scale": 1.5,
        "tolerance": 1e-10,
        "eval": {},
    }


def _default_eigen_config() -> dict:
    return {
        "cases": [
            {
                "group": {"kind": "finite", "generators": _C4_GENS},
                "xi": [[2.0, 0.0], [0.0, 0.0]],
                "x": [0.3, 0.7],
                "expect": [4.0, 0.0],
                "tol": 1e-4,
            },
            {
                "group": {"kind": "special_orthogonal", "size": 2},
                "xi": [[1.0, 0.0], [0.0, 0.5]],
                "x": [0.29, -0.53],
                "expect": [0.75, 0.0],
                "tol": 1e-4,
            },
        ],
        "eval": {},
    }


def _default_posdef_config() -> dict:
    groups = [
        {"kind": "finite", "generators": _C4_GENS},
        {"kind": "finite", "generators": _D8_GENS},
        {"kind": "special_orthogonal", "size": 2},
        {"kind": "special_orthogonal", "size": 3},
    ]
    cases = []
    for i in range(10):
        cases.append(
            {
                "group": groups[i % 4],
                "random_real_xi": True,
                "seed": 90 + i,
                "num_motions": 12,
                "expect": VERDICT_CONSISTENT,
            }
        )
    cases.append(
        {
            "group": {"kind": "special_orthogonal", "size": 2},
            "xi": [[0.0, 1.0], [0.0, 0.0]],
            "motions": [{"translation": [0.0, 0.0]}, {"translation": [3.0, 0.0]}],
            "expect": VERDICT_VIOLATED,
        }
    )
    return {"cases": cases, "eval": {"samples": 20000, "seed": 5}}


def _default_equivalence_config() -> dict:
    inv_sqrt2 = math.sqrt(2.0) / 2.0
    return {
        "cases": [
            {
                "group": {"kind": "finite", "generators": _C4_GENS},
                "xi": [1.0, 0.0],
                "xi2": [0.0, 1.0],
                "expect": True,
            },
            {
                "group": {"kind": "finite", "generators": _C4_GENS},
                "xi": [1.0, 0.0],
                "xi2": [inv_sqrt2, inv_sqrt2],
                "expect": False,
                "min_separation": 1e-6,
            },
            {
                "group": {"kind": "special_orthogonal", "size": 2},
                "xi": [[1.0, 0.0], [0.0, 1.0]],
                "xi2": [0.0, 0.0],
                "expect": True,
                "constant_value": [1.0, 0.0],
                "constant_tol": 1e-12,
            },
        ],
        "eval": {},
    }


def _default_crossgroup_config() -> dict:
    return {
        "n": 4,
        "groups": [
            {"kind": "special_orthogonal", "size": 4},
            {"kind": "unitary", "size": 2},
            {"kind": "special_unitary", "size": 2},
            {"kind": "symplectic", "size": 1},
        ],
        "probes": [{"lam": 1.0, "r": 0.5}, {"lam": 2.0, "r": 1.5}],
        "eval": {"samples": 100000, "seed": 7},
    }


_DEFAULT_SUITE_CONFIGS = {
    "functional": _default_functional_config,
    "eigen": _default_eigen_config,
    "posdef": _default_posdef_config,
    "equivalence": _default_equivalence_config,
    "crossgroup": _default_crossgroup_config,
}


def _check(name: str, ok: bool, detail: str, measured=None, threshold=None) -> dict:
    return {
        "name": name,
        "pass": bool(ok),
        "measured": None if measured is None else float(measured),
        "threshold": None if threshold is None else float(threshold),
        "detail": detail,
    }


def _suite_functional(cfg: dict, econf: EvalConfig):
    checks = []
    tol = float(cfg.get("tolerance", 1e-10))
    rng = np.random.default_rng(int(cfg.get("seed", 2024)))
    scale = float(cfg.get("xi_scale", 1.5))
    for gidx, gspec in enumerate(cfg["groups"]):
        handle = build_group(GroupSpec.from_json(gspec))
        n = handle.n
        for t in range(int(cfg.get("trials", 50))):
            xi = scale * (rng.standard_normal(n) + 0.5j * rng.standard_normal(n))
            if t % 2 == 0:
                xi = xi.real.astype(complex)  # alternate real and complex spectra
            mats = handle._sample(rng, 2)
            g1 = MotionElement(rng.uniform(-2, 2, n), mats[0])
            g2 = MotionElement(rng.uniform(-2, 2, n), mats[1])
            rep = verify_functional_equation(handle, xi, g1, g2, econf)
            bound = tol + 4.0 * rep.stderr
            checks.append(
                _check(
                    f"group{gidx}-trial{t}",
                    rep.residual <= bound,
                    f"residual {rep.residual:.3e} (tol {tol:g}, stderr {rep.stderr:.1e})",
                    measured=rep.residual,
                    threshold=bound,
                )
            )
    return checks


def _suite_eigen(cfg: dict, econf: EvalConfig):
    checks = []
    for cidx, case in enumerate(cfg["cases"]):
        handle = build_group(GroupSpec.from_json(case["group"]))
        xi = _spectral_from(case["xi"], handle.n)
        x = np.asarray(case["x"], dtype=float)
        expect = complex(case["expect"][0], case["expect"][1])
        tol = float(case.get("tol", 1e-4))
        est = eigen_check(handle, xi, x, econf)
        err = abs(est - expect) / max(1.0, abs(expect))
        checks.append(
            _check(
                f"case{cidx}",
                err <= tol,
                f"estimate {est:.6f}, expected {expect:.6f}, rel err {err:.2e}",
                measured=err,
                threshold=tol,
            )
        )
    return checks


def _suite_posdef(cfg: dict, econf: EvalConfig):
    checks = []
    for cidx, case in enumerate(cfg["cases"]):
        handle = build_group(GroupSpec.from_json(case["group"]))
        if case.get("random_real_xi"):
            rng = np.random.default_rng(int(case.get("seed", 0)))
            xi = SpectralParam(rng.uniform(-2.0, 2.0, handle.n).astype(complex))
        else:
            xi = _spectral_from(case["xi"], handle.n)
        if "motions" in case:
            motions = []
            for m in case["motions"]:
                rot = np.asarray(m["rotation"], dtype=float) if "rotation" in m else np.eye(handle.n)
                motions.append(MotionElement(np.asarray(m["translation"], dtype=float), rot))
            report = gram_matrix(handle, xi, motions, econf)
        else:
            report = posdef_verdict(
                handle, xi, econf, num_motions=int(case.get("num_motions", 24))
            )
        expect = case.get("expect", VERDICT_CONSISTENT)
        checks.append(
            _check(
                f"case{cidx}",
                report.verdict == expect,
                f"verdict {report.verdict}, min eig {report.min_eigenvalue:.3e}"
                f" (stderr {report.propagated_stderr:.1e})",
                measured=report.min_eigenvalue,
            )
        )
    return checks


def _suite_equivalence(cfg: dict, econf: EvalConfig):
    checks = []
    for cidx, case in enumerate(cfg["cases"]):
        handle = build_group(GroupSpec.from_json(case["group"]))
        xi1 = _spectral_from(case["xi"], handle.n)
        xi2 = _spectral_from(case["xi2"], handle.n)
        decided = equivalent(handle, xi1, xi2, tol=float(case.get("tol", 1e-9)))
        expect = bool(case["expect"])
        ok = decided == expect
        detail = f"equivalent={decided}, expected {expect}"
        measured = None
        threshold = None
        if ok and not expect and "min_separation" in case:
            sep, at = separation_probe(handle, xi1, xi2, config=econf)
            measured, threshold = sep, float(case["min_separation"])
            ok = sep > threshold
            detail += f", separation {sep:.3e} at {np.round(at, 3).tolist()}"
        if ok and case.get("constant_value") is not None:
            target = complex(case["constant_value"][0], case["constant_value"][1])
            ctol = float(case.get("constant_tol", 1e-12))
            rng = np.random.default_rng(3)
            worst = 0.0
            for _ in range(10):
                x = rng.uniform(-2.0, 2.0, handle.n)
                res = eval_spherical(handle, xi1, x, econf)
                worst = max(worst, abs(res.value - target))
            measured, threshold = worst, ctol
            ok = worst <= ctol
            detail += f", max |phi - {target:g}| = {worst:.2e}"
        checks.append(_check(f"case{cidx}", ok, detail, measured, threshold))
    return checks


def _suite_crossgroup(cfg: dict, econf: EvalConfig):
    checks = []
    n = int(cfg.get("n", 4))
    handles = [build_group(GroupSpec.from_json(g)) for g in cfg["groups"]]
    for h in handles:
        if h.n != n:
            raise ConfigError(f"group {h.spec.kind} acts on R^{h.n}, expected R^{n}")
    for pidx, probe in enumerate(cfg["probes"]):
        lam = float(probe["lam"])
        r = float(probe["r"])
        xi = np.zeros(n, dtype=complex)
        xi[0] = lam
        x = np.zeros(n)
        x[0] = r
        closed = closed_form_spherical(n, lam, r)
        values = []
        for h in handles:
            res = eval_spherical(h, xi, x, econf, method="monte_carlo")
            values.append((h.spec.kind, res))
        for kind, res in values:
            gap = abs(res.value - closed)
            bound = 3.0 * max(res.stderr, 1e-15)
            checks.append(
                _check(
                    f"probe{pidx}-{kind}-vs-closed",
                    gap <= bound,
                    f"|mc - closed| = {gap:.2e}, 3 stderr = {3 * res.stderr:.2e}",
                    measured=gap,
                    threshold=bound,
                )
            )
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                ka, ra = values[i]
                kb, rb = values[j]
                gap = abs(ra.value - rb.value)
                bound = 3.0 * math.hypot(ra.stderr, rb.stderr)
                checks.append(
                    _check(
                        f"probe{pidx}-{ka}-vs-{kb}",
                        gap <= bound,
                        f"|a - b| = {gap:.2e}, 3 combined stderr = {bound:.2e}",
                        measured=gap,
                        threshold=bound,
                    )
                )
    return checks


_SUITES = {
    "functional": _suite_functional,
    "eigen": _suite_eigen,
    "posdef": _suite_posdef,
    "equivalence": _suite_equivalence,
    "crossgroup": _suite_crossgroup,
}


def cmd_verify(args) -> int:
    started = time.perf_counter()
    if args.suite not in _SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {sorted(_SUITES)}")
    cfg = _load_config(args.config) if args.config else _DEFAULT_SUITE_CONFIGS[args.suite]()
    econf = _eval_config_from(cfg, args)
    checks = _SUITES[args.suite](cfg, econf)
    failed = sum(1 for c in checks if not c["pass"])
    for c in checks:
        status = "PASS" if c["pass"] else "FAIL"
        print(f"{status} {args.suite}/{c['name']}: {c['detail']}")
    print(f"{args.suite}: {len(checks) - failed}/{len(checks)} checks passed")
    if args.out:
        report = {
            "suite": args.suite,
            "passed": len(checks) - failed,
            "failed": failed,
            "checks": checks,
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        _write_manifest(
            args.out, "verify", cfg, started,
            {"checks_passed": len(checks) - failed, "checks_failed": failed},
        )
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------


def _profile_from(cfg: dict):
    prof = cfg.get("profile")
    grid_fn = cfg.get("grid_function")
    if isinstance(grid_fn, dict):
        if grid_fn.get("builtin") != "gaussian":
            raise ConfigError("grid_function supports builtin: gaussian")
        support = float(grid_fn.get("support_radius", 6.0))
        points = int(grid_fn.get("points_per_axis", 65))
        return GridFunction(
            lambda xs: np.exp(-np.sum(xs * xs, axis=-1)), support, points
        )
    if not isinstance(prof, dict):
        raise ConfigError("config needs a 'profile' or 'grid_function' object")
    if prof.get("builtin") == "gaussian":
        r_max = float(prof.get("r_max", 6.0))
        num = int(prof.get("num", 32769))
        return RadialProfile.from_function(lambda r: np.exp(-(r**2)), r_max, num)
    if "csv" in prof:
        rows = np.loadtxt(prof["csv"], delimiter=",", ndmin=2)
        if rows.shape[1] == 2:
            values = rows[:, 1].astype(complex)
        elif rows.shape[1] == 3:
            values = rows[:, 1] + 1j * rows[:, 2]
        else:
            raise ConfigError("profile csv needs columns r,value or r,re,im")
        return RadialProfile(
            rows[:, 0], values, float(prof.get("support_radius", rows[-1, 0]))
        )
    if "grid" in prof and "values" in prof:
        grid = np.asarray(prof["grid"], dtype=float)
        values = np.asarray(prof["values"], dtype=float)
        return RadialProfile(grid, values, float(prof.get("support_radius", grid[-1])))
    raise ConfigError("profile must give builtin: gaussian, a csv path, or grid/values")


def cmd_transform(args) -> int:
    started = time.perf_counter()
    cfg = _load_config(args.config)
    spec = GroupSpec.from_json(cfg.get("group", {}))
    handle = build_group(spec)
    profile = _profile_from(cfg)
    xis = [_spectral_from(item, handle.n) for item in cfg.get("xi", [])]
    if not xis:
        raise ConfigError("config needs a non-empty 'xi' list")
    econf = _eval_config_from(cfg, args)
    rtol = float(cfg.get("rtol", 1e-6))
    results = spherical_transform(handle, profile, xis, econf, rtol=rtol)

    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "fingerprint", "value_re", "value_im", "est_error", "method"])
        for idx, (xi, res) in enumerate(zip(xis, results)):
            fp = fingerprint(handle, xi)
            fp_str = ";".join(f"{z.real:.17g},{z.imag:.17g}" for z in fp.values)
            writer.writerow(
                [idx, fp_str, _fmt(res.value.real), _fmt(res.value.imag),
                 _fmt(res.est_error), res.method]
            )
    _write_manifest(args.out, "transform", cfg, started)
    print(f"wrote {args.out} ({len(xis)} spectra)")
    return EXIT_OK


# ---------------------------------------------------------------------
# fingerprint
# ---------------------------------------------------------------------


def cmd_fingerprint(args) -> int:
    started = time.perf_counter()
    cfg = _load_config(args.config)
    spec = GroupSpec.from_json(cfg.get("group", {}))
    handle = build_group(spec)
    xi = _spectral_from(cfg.get("xi", []), handle.n)
    max_degree = cfg.get("max_degree")
    fp = fingerprint(handle, xi, max_degree)
    payload: dict = {"group": spec.to_json(), "fingerprint": fp.to_json()}
    status = EXIT_OK
    if "xi2" in cfg:
        xi2 = _spectral_from(cfg["xi2"], handle.n)
        fp2 = fingerprint(handle, xi2, max_degree)
        same = equivalent(handle, xi, xi2, tol=float(cfg.get("tol", 1e-9)),
                          max_degree=max_degree)
        payload["fingerprint2"] = fp2.to_json()
        payload["equivalent"] = same
        if "expect_equivalent" in cfg and bool(cfg["expect_equivalent"]) != same:
            status = EXIT_CHECK_FAILED
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        _write_manifest(args.out, "fingerprint", cfg, started)
    else:
        print(text)
    return status


# ---------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphfn",
        description="Averaged plane waves on R^n: evaluation, verification, transforms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_out: bool):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", required=need_out, help="output file path")
        p.add_argument("--seed", type=int, default=None, help="override eval seed")
        p.add_argument("--samples", type=int, default=None, help="override sample count")
        p.add_argument("--tol", type=float, default=None, help="override tolerance")
        p.add_argument("--threads", type=int, default=1, help="worker threads")

    p_eval = sub.add_parser("eval", help="evaluate phi_xi on a point list")
    common(p_eval, need_out=True)
    p_eval.add_argument(
        "--method",
        default=None,
        choices=["auto", "monte_carlo", "finite_sum", "torus_quadrature", "closed_form"],
    )
    p_eval.set_defaults(fn=cmd_eval, requires_config=True)

    p_verify = sub.add_parser("verify", help="run a check suite")
    p_verify.add_argument("suite", choices=sorted(_SUITES))
    common(p_verify, need_out=False)
    p_verify.set_defaults(fn=cmd_verify, requires_config=False)

    p_transform = sub.add_parser("transform", help="spherical transform of a profile")
    common(p_transform, need_out=True)
    p_transform.set_defaults(fn=cmd_transform, requires_config=True)

    p_fp = sub.add_parser("fingerprint", help="invariant fingerprint of xi")
    common(p_fp, need_out=False)
    p_fp.set_defaults(fn=cmd_fingerprint, requires_config=True)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which matches the config-error code
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "requires_config", False) and not args.config:
        _emit_error("ConfigError", f"{args.command} requires --config")
        return EXIT_CONFIG
    try:
        return args.fn(args)
    except ConfigError as exc:
        _emit_error("ConfigError", str(exc))
        return EXIT_CONFIG
    except SphfnError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return EXIT_RUNTIME
    except (ValueError, TypeError, KeyError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
