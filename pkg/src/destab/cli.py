"""``destab``: batch front end over JSON problem files.

    destab check     --input torus.json
    destab bundle-hn --input lattice.json --format json --verify

Exit status: 0 on success (semistable and unstable alike), 2 for invalid
input, 3 when a capacity limit is hit.
"""
import argparse
from decimal import Decimal, localcontext
from fractions import Fraction
import json
import math
import sys

from . import __version__
from . import linalg as la
from .cone import InnerProduct, SignedSquare, kkt_candidates
from .errors import DestabError, InputError
from .gauge import (
    SubobjectLattice,
    bundle_optimal,
    global_optimal_over_lattice,
    hn_chains_brute_force,
    hn_filtration,
    limit_object,
    pair_hn,
    pair_optimal,
    pair_semistable,
    phi_multiplier,
)
from .gl import ChainProblem, HomProblem, chain_invariants, chain_limit, chain_semistable, hom_cross_check, hom_optimal
from .oracles import grid_sphere_minimum, never_beats
from .torus import (
    Semistable,
    SupportVector,
    WeightSystem,
    destabilizing_cone,
    enumerate_strata,
    hermitian_class,
    initial_pairing_bound,
    optimal_destabilizing,
    verify_limit_semistable,
)

KINDS = {
    "check": "torus",
    "destab": "torus",
    "limit": "torus",
    "strata": "torus",
    "hom": "hom",
    "chain": "chain",
    "bundle-hn": "bundle",
    "pair-hn": "pair",
    "class": "class",
}


# -- serialization -------------------------------------------------------------


def rat(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rats(xs):
    return [rat(x) for x in xs]


def float_approx(value):
    if value == math.inf:
        return "inf"
    with localcontext() as ctx:
        ctx.prec = 40
        root = (Decimal(value.square.numerator) / Decimal(value.square.denominator)).sqrt()
        return format(value.sign * root, ".12g") if value.sign else "0"


def signed_square(value):
    if value == math.inf:
        return "inf"
    return {"sign": value.sign, "square": rat(value.square)}


def optimal_block(ray, value, **extra):
    block = {"ray": list(la.primitive(ray)), "lambda_inf": signed_square(value), "float_approx": float_approx(value)}
    block.update(extra)
    return block


def emit(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    lines = []
    _text(report, 0, lines)
    return "\n".join(lines) + "\n"


def _text(obj, depth, lines):
    pad = "  " * depth
    for key, val in obj.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            _text(val, depth + 1, lines)
        elif isinstance(val, list) and val and all(isinstance(v, dict) for v in val):
            lines.append(f"{pad}{key}:")
            for i, v in enumerate(val):
                lines.append(f"{pad}  [{i}]")
                _text(v, depth + 2, lines)
        else:
            lines.append(f"{pad}{key}: {json.dumps(val)}")


def parse_report(text):
    return json.loads(text)


# -- problem ingestion ---------------------------------------------------------


def _need(obj, key, path, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{path}.{key}: missing")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise InputError(f"{path}.{key}: expected {kind.__name__ if isinstance(kind, type) else 'list'}")
    return val


def _number(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise InputError(f"{path}: expected a rational number")
    try:
        return la.frac(x)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{path}: {x!r} is not a rational number") from None


def _vector(xs, path):
    if not isinstance(xs, list):
        raise InputError(f"{path}: expected a list")
    return tuple(_number(x, f"{path}[{i}]") for i, x in enumerate(xs))


def _matrix(rows, path):
    if not isinstance(rows, list) or not rows:
        raise InputError(f"{path}: expected a nonempty list of rows")
    return tuple(_vector(r, f"{path}[{i}]") for i, r in enumerate(rows))


def load_problem(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise InputError("$: expected an object")
    kind = _need(doc, "kind", "$", str)
    payload = _need(doc, "payload", "$", dict)
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict) or not all(isinstance(v, str) for v in meta.values()):
        raise InputError("$.metadata: expected a map of strings")
    return kind, payload, meta


def torus_problem(payload):
    p = "$.payload"
    dim = _need(payload, "dim", p, int)
    weights = _need(payload, "weights", p, list)
    ws = []
    for i, w in enumerate(weights):
        wp = f"{p}.weights[{i}]"
        ws.append((_need(w, "label", wp, str), _vector(_need(w, "chi", wp), f"{wp}.chi")))
    ws = WeightSystem(dim, tuple(ws))
    tau = _vector(_need(payload, "tau", p), f"{p}.tau")
    gram = payload.get("gram")
    q = InnerProduct(_matrix(gram, f"{p}.gram")) if gram is not None else InnerProduct.identity(dim)
    comps = {}
    for i, s in enumerate(payload.get("support", [])):
        sp = f"{p}.support[{i}]"
        comps[_need(s, "label", sp, str)] = _number(_need(s, "amp_sq", sp), f"{sp}.amp_sq")
    return ws, tau, q, SupportVector(comps)


def lattice_problem(payload, with_tau):
    p = "$.payload"
    nodes = []
    for i, n in enumerate(_need(payload, "nodes", p, list)):
        np_ = f"{p}.nodes[{i}]"
        nodes.append(
            {
                "label": _need(n, "label", np_, str),
                "rank": _need(n, "rank", np_, int),
                "degree": _need(n, "degree", np_, int),
                "contains_phi": bool(n.get("contains_phi", False)),
            }
        )
    order = []
    for i, pair in enumerate(payload.get("order", [])):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
            raise InputError(f"{p}.order[{i}]: expected [labelA, labelB]")
        order.append(tuple(pair))
    lat = SubobjectLattice(nodes, order)
    tau = _number(_need(payload, "tau", p), f"{p}.tau") if with_tau else None
    return lat, tau


# -- subcommands ---------------------------------------------------------------


def _torus_core(payload, args, certificate=False):
    ws, tau, q, v = torus_problem(payload)
    opt = optimal_destabilizing(ws, tau, q, v)
    report = {}
    if isinstance(opt, Semistable):
        report["verdict"] = "semistable"
        report["optimal"] = None
        report["min_value"] = signed_square(opt.value)
        return report, (ws, tau, q, v, opt)
    report["verdict"] = "unstable"
    report["optimal"] = optimal_block(opt.ray.direction, opt.lambda_inf)
    if certificate:
        cone = destabilizing_cone(ws, v)
        cert = opt.certificate
        report["certificate"] = {
            "active_constraints": [list(la.primitive(cone.rows[j])) for j in cert.active_set],
            "multipliers": rats(cert.multipliers),
            "theta": rat(cert.theta),
            "residual": rats(cert.residual),
        }
        report["lower_bound"] = signed_square(initial_pairing_bound(ws, tau, q, v))
        if args.verify:
            cone = destabilizing_cone(ws, v)
            cands = kkt_candidates(q, cone, q.raise_(tuple(-x for x in tau)))
            grid, feasible = grid_sphere_minimum(q, cone, tau, seed=args.seed)
            report["verification"] = {
                "kkt_candidates": len(cands),
                "grid_minimum": format(grid, ".12g"),
                "grid_feasible_samples": feasible,
                "grid_never_beats": bool(never_beats(opt.lambda_inf, grid)),
            }
    return report, (ws, tau, q, v, opt)


def cmd_check(payload, args):
    return _torus_core(payload, args)[0]


def cmd_destab(payload, args):
    return _torus_core(payload, args, certificate=True)[0]


def cmd_limit(payload, args):
    report, (ws, tau, q, v, opt) = _torus_core(payload, args, certificate=True)
    if isinstance(opt, Semistable):
        return report
    res = verify_limit_semistable(ws, tau, q, v)
    report["limit"] = {label: rat(a) for label, a in sorted(res.limit.components.items())}
    report["induced"] = {
        "weights": [label for label, _ in res.induced.weights.weights],
        "tau_prime": rats(res.induced.tau_prime),
        "orthogonality": rat(res.orthogonality),
    }
    report["limit_semistable"] = res.semistable
    return report


def cmd_strata(payload, args):
    report, (ws, tau, q, v, opt) = _torus_core(payload, args)
    strata = []
    for st in enumerate_strata(ws, tau, q):
        entry = {"semistable": st.ray is None}
        if st.ray is not None:
            entry.update(optimal_block(st.ray.direction, st.lambda_inf))
        entry["supports"] = sorted(sorted(s) for s in st.supports)
        strata.append(entry)
    report["strata"] = strata
    return report


def cmd_hom(payload, args):
    p = HomProblem(_matrix(_need(payload, "matrix", "$.payload"), "$.payload.matrix"),
                   _number(_need(payload, "t", "$.payload"), "$.payload.t"))
    opt = hom_optimal(p)
    report = {"rank": p.r - (opt.kernel_dim if opt else 0)}
    if opt is None:
        report["verdict"] = "semistable"
        report["optimal"] = None
        return report
    flat = [x for row in opt.ray for x in row]
    prim = la.primitive(flat)
    r = p.r
    report["verdict"] = "unstable"
    report["optimal"] = {
        "ray": [list(prim[i * r:(i + 1) * r]) for i in range(r)],
        "lambda_inf": signed_square(opt.lambda_inf),
        "float_approx": float_approx(opt.lambda_inf),
    }
    report["kernel_dim"] = opt.kernel_dim
    report["kernel_basis"] = [rats(b) for b in la.canonical_subspace(opt.kernel_basis, r)]
    if args.verify:
        report["verification"] = {"torus_cross_check": hom_cross_check(p)}
    return report


def cmd_chain(payload, args):
    mats = _need(payload, "matrices", "$.payload", list)
    p = ChainProblem(tuple(_matrix(m, f"$.payload.matrices[{i}]") for i, m in enumerate(mats)),
                     _vector(_need(payload, "t", "$.payload"), "$.payload.t"))
    inv = chain_invariants(p)
    report = {
        "verdict": "semistable" if chain_semistable(p) else "unstable",
        "optimal": None,
        "dims": list(p.dims),
        "monotone_dims": p.monotone,
        "rho": list(inv.rho),
        "flag": [[rats(b) for b in w] for w in inv.images],
        "kernel_dims": [len(k) for k in inv.kernels],
    }
    if report["verdict"] == "unstable":
        lim = chain_limit(p)
        report["limit"] = {
            "quotient_dims": list(lim.quotient_dims),
            "maps": [[rats(row) for row in m] for m in lim.maps],
            "stable": lim.stable,
        }
    return report


def cmd_bundle(payload, args):
    lat, _ = lattice_problem(payload, False)
    f = hn_filtration(lat)
    report = {"hn": {"chain": list(f.chain), "type": [list(s) for s in f.type.steps]}}
    if f.type.k == 1:
        report["verdict"] = "semistable"
        report["optimal"] = None
    else:
        opt = bundle_optimal(f.type)
        report["verdict"] = "unstable"
        report["optimal"] = optimal_block(opt.ray, opt.lambda_inf, eigenvalues=rats(opt.ray))
    report["limit_object"] = [{"rank": q.rank, "degree": q.degree} for q in limit_object(f.type)]
    if args.verify:
        glob = global_optimal_over_lattice(lat)
        report["verification"] = {
            "brute_force_hn_chains": [list(c) for c in hn_chains_brute_force(lat)],
            "global_optimum_agrees": glob.agrees,
        }
    return report


def cmd_pair(payload, args):
    lat, tau = lattice_problem(payload, True)
    if pair_semistable(lat, tau):
        report = {"verdict": "semistable", "optimal": None}
        if args.verify:
            report["verification"] = {"global_optimum_agrees": global_optimal_over_lattice(lat, tau).agrees}
        return report
    f = pair_hn(lat, tau)
    opt = pair_optimal(f.type, f.phi_step, f.m, tau)
    report = {
        "verdict": "unstable",
        "optimal": optimal_block(opt.ray, opt.lambda_inf, eigenvalues=rats(opt.ray), case=opt.case),
        "tau_hn": {
            "chain": list(f.chain),
            "m": f.m,
            "case": f.case,
            "phi_step": f.phi_step,
            "type": [list(s) for s in f.type.steps],
        },
        "limit_object": [
            {"rank": q.rank, "degree": q.degree, "phi_bar": q.phi_bar}
            for q in limit_object(f.type, f.phi_step, f.m)
        ],
    }
    if opt.case == 2:
        report["phi_multiplier"] = rat(phi_multiplier(opt, f.type, f.phi_step))
    if args.verify:
        report["verification"] = {
            "solver_agrees": opt.agrees,
            "global_optimum_agrees": global_optimal_over_lattice(lat, tau).agrees,
        }
    return report


def cmd_class(payload, args):
    s = _vector(_need(payload, "s", "$.payload"), "$.payload.s")
    vals, dims = hermitian_class(s)
    return {"eigenvalues": rats(vals), "flag": list(dims)}


COMMANDS = {
    "check": cmd_check,
    "destab": cmd_destab,
    "limit": cmd_limit,
    "strata": cmd_strata,
    "hom": cmd_hom,
    "chain": cmd_chain,
    "bundle-hn": cmd_bundle,
    "pair-hn": cmd_pair,
    "class": cmd_class,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="destab", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("--input", required=True, help="problem JSON file")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--verify", action="store_true", help="also run brute-force oracles")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized oracles")
    return parser


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if not 0 <= args.seed < 2**64:
        err.write("--seed: must be an unsigned 64-bit integer\n")
        return 2
    try:
        kind, payload, meta = load_problem(args.input)
        if kind != KINDS[args.command]:
            raise InputError(f"$.kind: '{kind}' does not match command '{args.command}'")
        body = COMMANDS[args.command](payload, args)
    except DestabError as exc:
        err.write(f"error: {exc}\n")
        return exc.exit_code
    report = {"tool_version": __version__, "command": args.command, "kind": kind}
    if meta:
        report["metadata"] = dict(sorted(meta.items()))
    report.update(body)
    out.write(emit(report, args.format))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
