"""Command-line front end.

Subcommands: ends, kurosh, decompose, classify-lattice, schreier,
selftest.  Reports are deterministic key/value trees rendered as text
or JSON; expensive results are cached content-addressed under the
cache directory (PROPENDS_CACHE_DIR or ~/.cache/propends).

Exit codes: 0 for success, including inconclusive results flagged in
the report; 1 for input errors; 2 for budget or configuration errors.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from . import __version__
from .cache import Cache, default_cache_dir
from .decompose import krull_schmidt, restriction_split_check, star_sequence_check
from .descriptors import FreeProP
from .dsl import parse_group_expr, parse_word
from .ends import AUTO, FRATTINI, INDEX_P, ends, ends_of_presentation
from .errors import (
    BudgetExceeded,
    DSLSyntaxError,
    IndexInfinite,
    NotClassifiable,
    PropEndsError,
)
from .finite_group import FiniteGroup, SubgroupEmbedding, cyclic_p_group
from .gmodule import augmentation_ideal, regular_module, trivial_module
from .grushko import (
    FreeProductDescriptor,
    LatticeData,
    build_standard_lattice,
    conjugated_lattice,
    cp_lattice_classify,
    grushko_bookkeeping,
    kurosh,
    random_unimodular,
    schreier_basis_cyclic_cover,
)
from .intlin import IntMatrix
from .words import format_word

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2


class _InputError(Exception):
    pass


def _element_order(g: FiniteGroup, e: int) -> int:
    x = e
    o = 1
    while x != 0:
        x = g.multiply(x, e)
        o += 1
    return o


def _add_common(sp):
    sp.add_argument("--p", type=int, default=None,
                    help="the prime (default 2, with a warning)")
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--max-cosets", type=int, default=20000)
    sp.add_argument("--trials", type=int, default=64)
    sp.add_argument("--enum-budget", type=int, default=2**22)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--cache-dir", default=None)
    sp.add_argument("--no-cache", action="store_true")
    sp.add_argument("--timing", action="store_true",
                    help="include wall-clock timing in the report "
                         "(off by default so reports are byte-stable)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="propends",
        description="Desk-scale invariants of ends of pro-p groups.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    subs = ap.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("ends", help="number-of-ends estimate")
    sp.add_argument("expr")
    sp.add_argument("--strategy", choices=(AUTO, FRATTINI, INDEX_P),
                    default=AUTO)
    _add_common(sp)

    sp = subs.add_parser("kurosh", help="Kurosh data of a finite-index "
                                        "subgroup of a free product")
    sp.add_argument("expr")
    sp.add_argument("--subgroup-kernel", default=None,
                    help='e.g. "a->1,b->1" (mod p), or "a->1 0,b->0 1" '
                         "with --kernel-moduli")
    sp.add_argument("--kernel-moduli", default=None,
                    help='comma-separated moduli, e.g. "2,2"')
    sp.add_argument("--subgroup-gens", default=None,
                    help='comma-separated generator words, e.g. "a^2, b"')
    _add_common(sp)

    sp = subs.add_parser("decompose", help="Krull-Schmidt decomposition")
    sp.add_argument("--group", required=True)
    sp.add_argument("--module", default="augmentation",
                    choices=("augmentation", "regular", "trivial"))
    _add_common(sp)

    sp = subs.add_parser("classify-lattice",
                         help="classify an order-p integer lattice")
    sp.add_argument("--sigma", default=None,
                    help='rows separated by ";", e.g. "0 -1; 1 -1"')
    sp.add_argument("--standard", default=None,
                    help='build and classify a standard lattice "a,b,c", '
                         "conjugated by a seeded unimodular matrix")
    _add_common(sp)

    sp = subs.add_parser("schreier",
                         help="explicit basis of the cyclic index-p cover "
                              "of a free group")
    sp.add_argument("rank", type=int)
    _add_common(sp)

    sp = subs.add_parser("selftest", help="run the built-in invariant suite")
    _add_common(sp)
    return ap


def _config_tree(args, warnings):
    p = args.p
    if p is None:
        p = 2
        warnings.append("no --p given; defaulting to p = 2")
    if p < 2 or args.depth < 1 or args.max_cosets < 1 or args.trials < 1 \
            or args.enum_budget < 1:
        raise BudgetExceeded("budgets, depth, trials, and p must be positive")
    return p, {
        "p": p,
        "depth": args.depth,
        "max_cosets": args.max_cosets,
        "trials": args.trials,
        "enum_budget": args.enum_budget,
        "seed": args.seed,
    }


def _word_str(w, pres):
    return format_word(w, pres.gen_names)


def _ends_payload(args, p, cfg):
    node = parse_group_expr(args.expr)
    desc = node.to_descriptor(p)
    rep = ends(
        desc,
        depth=cfg["depth"],
        coset_budget=cfg["max_cosets"],
        strategy=args.strategy,
    )
    out = {
        "expression": node.print(),
        "e": rep.e_estimate,
        "h0": rep.h0,
        "h1_evidence": rep.h1_evidence,
        "notes": list(rep.notes),
    }
    if rep.chain is not None:
        out["chain"] = {
            "strategy": rep.chain.strategy,
            "truncated": rep.chain.truncated,
            "levels": [
                {
                    "index": lv.index_total,
                    "d": lv.d,
                    "step": lv.step,
                    "normal": lv.normal,
                }
                for lv in rep.chain.levels
            ],
        }
    if rep.trace is not None:
        out["stable_ranks"] = list(rep.trace.stable)
        out["settled"] = [
            rep.trace.settled(n) for n in range(len(rep.trace.stable))
        ]
    return out


def _parse_kernel_spec(text, moduli_text, pres, p):
    pairs = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "->" not in chunk:
            raise _InputError(f"bad kernel entry {chunk!r}; expected gen->int")
        name, vals = chunk.split("->", 1)
        name = name.strip()
        gens = [pres.name(i + 1) for i in range(pres.n_gens)]
        if name not in gens:
            raise _InputError(f"unknown generator {name!r}")
        try:
            pairs[name] = tuple(int(v) for v in vals.split())
        except ValueError:
            raise _InputError(f"bad kernel value in {chunk!r}")
    if moduli_text:
        try:
            moduli = [int(m) for m in moduli_text.split(",")]
        except ValueError:
            raise _InputError(f"bad moduli {moduli_text!r}")
    else:
        moduli = [p]
    images = []
    for i in range(pres.n_gens):
        v = pairs.get(pres.name(i + 1), (0,) * len(moduli))
        if len(v) != len(moduli):
            raise _InputError(
                f"kernel image for {pres.name(i + 1)} has {len(v)} "
                f"coordinates, expected {len(moduli)}"
            )
        images.append(v)
    return images, moduli


def _kurosh_payload(args, p, cfg):
    node = parse_group_expr(args.expr)
    desc = node.to_descriptor(p)
    fpd = FreeProductDescriptor(desc)
    pres = fpd.pres
    if args.subgroup_kernel:
        images, moduli = _parse_kernel_spec(
            args.subgroup_kernel, args.kernel_moduli, pres, p
        )
        spec = {"kernel": (images, moduli)}
    elif args.subgroup_gens:
        names = tuple(pres.name(i + 1) for i in range(pres.n_gens))
        spec = {
            "gens": [
                parse_word(w.strip(), names)
                for w in args.subgroup_gens.split(",")
                if w.strip()
            ]
        }
    else:
        raise _InputError("need --subgroup-kernel or --subgroup-gens")
    rep = kurosh(fpd, spec, budget=cfg["max_cosets"])
    factors = []
    for fac, orbits in rep.factor_orbits:
        factors.append(
            {
                "factor": fac.label,
                "double_cosets": len(orbits),
                "orbits": [
                    {
                        "representative": _word_str(o.rep_word, pres),
                        "size": o.size,
                        "nontrivial_intersection": o.nontrivial,
                        "intersection_generators": [
                            _word_str(w, pres) for w in o.intersection_gens
                        ],
                    }
                    for o in orbits
                ],
            }
        )
    return {
        "expression": node.print(),
        "index": rep.index,
        "factors": factors,
        "free_rank": rep.r,
        "s_h": rep.s_h,
        "total_rank": rep.total_rank,
        "reidemeister_schreier_rank": rep.rs_rank,
        "flags": list(rep.flags),
    }


def _decompose_payload(args, p, cfg):
    node = parse_group_expr(args.group)
    desc = node.to_descriptor(p)
    group = FiniteGroup(desc.compile(), p, max_cosets=cfg["max_cosets"])
    if args.module == "augmentation":
        mod = augmentation_ideal(group)
    elif args.module == "regular":
        mod = regular_module(group)
    else:
        mod = trivial_module(group)
    rep = krull_schmidt(
        mod,
        seed=cfg["seed"],
        trials=cfg["trials"],
        enum_budget=cfg["enum_budget"],
    )
    return {
        "group": node.print(),
        "group_order": group.order,
        "module": args.module,
        "dim": mod.dim,
        "summands": [
            {
                "dim": piece.dim,
                "multiplicity": mult,
                "certificates": sorted(set(certs)),
            }
            for piece, mult, certs in rep.summands
        ],
        "notes": list(rep.grouping_notes),
        "block_diagonalization_verified": rep.verify(),
    }


def _parse_sigma(text):
    rows = []
    for row in text.split(";"):
        row = row.strip()
        if not row:
            continue
        try:
            rows.append([int(x) for x in row.replace(",", " ").split()])
        except ValueError:
            raise _InputError(f"bad matrix row {row!r}")
    if not rows:
        raise _InputError("empty matrix")
    return IntMatrix(rows)


def _classify_payload(args, p, cfg):
    if args.sigma and args.standard:
        raise _InputError("give either --sigma or --standard, not both")
    if args.sigma:
        lat = LatticeData(p, _parse_sigma(args.sigma))
        source = {"sigma_rank": lat.rank}
    elif args.standard:
        try:
            a, b, c = (int(x) for x in args.standard.split(","))
        except ValueError:
            raise _InputError('--standard expects "a,b,c"')
        lat = build_standard_lattice(p, a, b, c)
        if lat.rank:
            v, vinv = random_unimodular(
                lat.rank, random.Random(cfg["seed"])
            )
            lat = conjugated_lattice(lat, v, vinv)
        source = {"standard": [a, b, c], "conjugated": lat.rank > 0}
    else:
        raise _InputError("need --sigma or --standard")
    cls = cp_lattice_classify(lat)
    return {
        "input": source,
        "rank": lat.rank,
        "class": {"a": cls.a, "b": cls.b, "c": cls.c},
    }


def _schreier_payload(args, p, cfg):
    if args.rank < 1:
        raise _InputError("rank must be >= 1")
    words, checks = schreier_basis_cyclic_cover(args.rank, p)
    from .words import free_group

    pres = free_group(args.rank)
    return {
        "rank": args.rank,
        "words": [_word_str(w, pres) for w in words],
        "count": len(words),
        "checks": {k: v for k, v in sorted(checks.items())},
    }


def _selftest_payload(args, p, cfg):
    checks = []

    def record(name, ok, detail=""):
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    catalog = [
        ("cyclic(4)", 2, "0"),
        ("cyclic(9)", 3, "0"),
        ("Zp", 2, "2"),
        ("cyclic(2) * cyclic(2)", 2, "2"),
        ("finite-rank-2-abelian", 2, "1"),
        ("free(2)", 2, "Infinity-evidence"),
    ]
    from .words import Presentation, commutator

    zp2 = Presentation(2, (commutator((1,), (2,)),), label="Zp^2")
    for text, cp, want in catalog:
        if text == "finite-rank-2-abelian":
            rep = ends_of_presentation(zp2, cp, depth=cfg["depth"],
                                       coset_budget=cfg["max_cosets"])
        else:
            desc = parse_group_expr(text).to_descriptor(cp)
            rep = ends(desc, depth=cfg["depth"],
                       coset_budget=cfg["max_cosets"])
        record(f"ends {text} p={cp}", rep.e_estimate == want,
               f"got {rep.e_estimate}, want {want}")
        if rep.trace is not None:
            last = len(rep.trace.dims) - 1
            mono = all(
                rep.trace.ranks[(n, m + 1)] <= rep.trace.ranks[(n, m)]
                for n in range(last)
                for m in range(n + 1, last)
            ) and all(
                rep.trace.stable[n] <= rep.trace.stable[n + 1]
                for n in range(last - 1)
            )
            record(f"colimit monotonicity {text} p={cp}", mono)
        if rep.chain is not None and len(rep.chain.levels) > 1:
            shifted = ends_of_presentation(
                rep.chain.levels[1].pres, cp,
                depth=max(2, cfg["depth"] - 1),
                coset_budget=cfg["max_cosets"],
            )
            record(
                f"chain shift {text} p={cp}",
                shifted.e_estimate == rep.e_estimate,
                f"shifted chain gave {shifted.e_estimate}",
            )

    for text, cp in (("finite{a,b; a^2, b^2, [a,b]}", 2),
                     ("cyclic(4)", 2), ("cyclic(9)", 3)):
        desc = parse_group_expr(text).to_descriptor(cp)
        g = FiniteGroup(desc.compile(), cp)
        record(f"star sequence {text}", star_sequence_check(g))
        if g.order > cp:
            # Embed an order-p cyclic subgroup via any order-p element.
            word = next(
                g.element_words[e]
                for e in range(1, g.order)
                if _element_order(g, e) == cp
            )
            emb = SubgroupEmbedding(g, cyclic_p_group(cp, cp), [word])
            record(f"restriction split {text}",
                   restriction_split_check(emb, seed=cfg["seed"]))

    fpd = FreeProductDescriptor(FreeProP(2, 2))
    rep = kurosh(fpd, {"kernel": ([(1, 0), (0, 1)], [2, 2])})
    record("Kurosh rank match free(2) index 4",
           rep.total_rank == rep.rs_rank == 5 and not rep.flags)
    bk = grushko_bookkeeping(
        fpd, [{"kernel": ([(1, 0), (0, 1)], [2, 2])}]
    )
    record("subgroup count formula free(2)", not bk["discrepancies"])

    _, sch = schreier_basis_cyclic_cover(2, 2)
    record("cyclic cover basis free(2) p=2", all(sch.values()))

    rng = random.Random(cfg["seed"])
    ok = True
    for cp in (2, 3, 5):
        a, b, c = rng.randrange(3), rng.randrange(3), rng.randrange(3)
        lat = build_standard_lattice(cp, a, b, c)
        if lat.rank:
            v, vinv = random_unimodular(lat.rank, rng)
            lat = conjugated_lattice(lat, v, vinv)
        ok = ok and cp_lattice_classify(lat).triple() == (a, b, c)
    record("lattice classifier round trip", ok)

    failures = [c["name"] for c in checks if not c["ok"]]
    return {
        "checks": checks,
        "passed": len(checks) - len(failures),
        "failed": len(failures),
        "failures": failures,
    }


_DISPATCH = {
    "ends": _ends_payload,
    "kurosh": _kurosh_payload,
    "decompose": _decompose_payload,
    "classify-lattice": _classify_payload,
    "schreier": _schreier_payload,
    "selftest": _selftest_payload,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    warnings = []
    try:
        p, cfg = _config_tree(args, warnings)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET

    cache = Cache(None)
    if not args.no_cache and args.command != "selftest":
        cache = Cache(args.cache_dir or default_cache_dir())
    key_parts = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("format", "cache_dir", "no_cache", "timing")
    }
    key = Cache.key(__version__, args.command, key_parts, cfg)

    t0 = time.monotonic()
    cached = cache.get(key)
    exit_code = EXIT_OK
    if cached is not None:
        payload = cached
    else:
        try:
            payload = _DISPATCH[args.command](args, p, cfg)
        except (DSLSyntaxError, _InputError, NotClassifiable) as exc:
            span = getattr(exc, "span", None)
            loc = f" at {span[0]}..{span[1]}" if span else ""
            print(f"error: {exc}{loc}", file=sys.stderr)
            return EXIT_INPUT
        except (BudgetExceeded, IndexInfinite) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        except PropEndsError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        cache.put(key, payload)
    elapsed = time.monotonic() - t0

    tree = {
        "command": args.command,
        "config": cfg,
        "warnings": warnings,
        "result": payload,
        "timing": f"{elapsed:.3f}s" if args.timing else "disabled",
    }
    from .report import render

    sys.stdout.write(render(tree, args.format))
    if args.command == "selftest" and payload["failed"]:
        return EXIT_INPUT
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
