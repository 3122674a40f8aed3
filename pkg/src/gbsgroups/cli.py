"""Command-line front end: ``gbs <subcommand> [input] [options]``."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from . import bstree, embed, gog, ratlin, verdicts, words
from .modmap import MalformedWord, compute_modular, fmt_matrix, fmt_rational, mu_eval

SCHEMA = 1
EXIT_OK, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2
SUBCOMMANDS = ("analyze", "mu", "nf", "ball", "tree-ball", "embed", "compression", "properness")


@dataclass
class RunConfig:
    subcommand: str
    input_path: Optional[str] = None
    builtin: Optional[str] = None
    depth: int = verdicts.DEFAULT_DEPTH
    radius: int = 4
    p: str = "2"
    seed: int = 0
    precision_bits: int = ratlin.DEFAULT_PRECISION_CAP
    json: bool = False
    dot: Optional[str] = None
    csv: Optional[str] = None
    case: str = "generic"
    word: Optional[str] = None
    cap: int = words.DEFAULT_BALL_CAP


def _load(cfg: RunConfig) -> gog.GBSData:
    if (cfg.builtin is None) == (cfg.input_path is None):
        raise gog.GBSError("give exactly one of --builtin or an input file")
    if cfg.builtin is not None:
        return gog.parse_builtin_spec(cfg.builtin)
    with open(cfg.input_path, encoding="utf-8") as fh:
        return gog.parse(fh.read())


def _dump(doc: dict) -> str:
    doc = dict(doc, schema=SCHEMA)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _summary(g: gog.GBSData) -> dict:
    return {"n": g.n, "d": gog.rank_d(g), "vertices": list(g.vertices), "edges": list(g.edge_ids),
            "tree": sorted(g.tree), "base": g.base}


def _nf_dict(g, nf) -> dict:
    return {"edges": [[e, s] for e, s in nf.edges], "groups": [list(z) for z in nf.groups],
            "word": words.word_str(g, words.nf_to_word(g, nf))}


def _cmd_mu(g, cfg) -> str:
    md = compute_modular(g)
    if cfg.json:
        return _dump({"graph": _summary(g),
                      "tau": {v: fmt_matrix(m) for v, m in md.tau.items()},
                      "mu": {e: fmt_matrix(m) for e, m in md.mu_stable.items()}})
    lines = [f"tau({v}) = {fmt_matrix(m)}" for v, m in md.tau.items()]
    lines += [f"mu(t_{e}) = {fmt_matrix(m)}" for e, m in md.mu_stable.items()]
    return "\n".join(lines) + "\n"


def _cmd_analyze(g, cfg) -> str:
    rep = verdicts.analyze(g, cfg.depth, Fraction(cfg.p), cfg.precision_bits)
    amen, hg, dist, comp = rep["amenable"], rep["haagerup"], rep["distortion"], rep["compression"]
    certs = {}
    if amen.certificate is not None:
        certs["ping_pong"] = amen.certificate.as_dict()
    if isinstance(rep["closure"].certificate, verdicts.SchottkyCertificate):
        certs["schottky"] = rep["closure"].certificate.as_dict()
    elif rep["closure"].certificate is not None:
        certs["invariant_form"] = fmt_matrix(rep["closure"].certificate)
    sharp = comp.as_dict()["alpha_p_sharp"]
    doc = {"graph": _summary(g),
           "amenable": amen.as_dict(),
           "closure": rep["closure"].as_dict(),
           "haagerup": hg.haagerup, "weakly_amenable": hg.weakly_amenable, "lambda": hg.lam,
           "exp_distorted": dist.exp_distorted, "distortion": dist.as_dict(),
           "alpha_p": comp.as_dict()["alpha_p"], "alpha_p_sharp": sharp,
           "compression": comp.as_dict(), "structure": rep["structure"].as_dict(),
           "certificates": certs}
    if cfg.json:
        return _dump(doc)
    lines = [f"graph: n={g.n} d={gog.rank_d(g)} vertices={len(g.vertices)} edges={len(g.edge_ids)}",
             f"amenable: {amen.status}" + (f" ({amen.reason})" if amen.reason else "")
             + (f" [searched to depth {amen.depth_reached}]" if amen.status == verdicts.UNKNOWN else ""),
             f"closure of mu(H_d): {rep['closure'].status}"
             + (f" ({rep['closure'].case})" if rep["closure"].case else "")
             + (f" [{rep['closure'].note}]" if rep["closure"].note else ""),
             f"haagerup: {hg.haagerup}  weakly amenable: {hg.weakly_amenable}  lambda: {hg.lam}",
             f"exponentially distorted: {dist.exp_distorted} ({dist.exp_subspace_note})",
             f"alpha_p (p={cfg.p}): {doc['alpha_p']}  alpha_p sharp: {sharp}",
             f"Ker mu free: {rep['structure'].ker_mu_free}  free-by-amenable: "
             f"{rep['structure'].free_by_amenable} ({rep['structure'].reason})"]
    for k, v in certs.items():
        lines.append(f"certificate {k}: {json.dumps(v, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def _cmd_nf(g, cfg) -> str:
    if cfg.word is None:
        raise MalformedWord("nf needs a word")
    w = words.parse_word(g, cfg.word)
    nf = words.normal_form(g, w)
    md = compute_modular(g)
    image = mu_eval(md, g, w)
    doc = {"input": cfg.word, "normal_form": _nf_dict(g, nf), "identity": nf.is_identity(),
           "mu": {"linear": fmt_matrix(image.linear),
                  "translation": [fmt_rational(x) for x in image.translation]},
           "phi": [[e, s] for e, s in words.phi(g, w)]}
    if cfg.json:
        return _dump(doc)
    return (f"normal form: {doc['normal_form']['word']}\n"
            f"edge length: {nf.length}\nidentity: {nf.is_identity()}\n")


def _cmd_ball(g, cfg) -> str:
    b = words.ball(g, cfg.radius, cap=cfg.cap)
    spheres = [len(b.sphere(r)) for r in range(cfg.radius + 1)]
    if cfg.json:
        return _dump({"radius": cfg.radius, "size": len(b), "spheres": spheres})
    return "\n".join(f"{r}\t{c}" for r, c in enumerate(spheres)) + f"\ntotal\t{len(b)}\n"


def _cmd_tree_ball(g, cfg) -> str:
    tb = bstree.tree_ball(g, cfg.radius, cap=cfg.cap)
    if cfg.dot:
        with open(cfg.dot, "w", encoding="utf-8") as fh:
            fh.write(tb.to_dot(g))
    spheres = [len(tb.sphere(r)) for r in range(cfg.radius + 1)]
    if cfg.json:
        return _dump({"radius": cfg.radius, "size": len(tb.vertices), "spheres": spheres,
                      "base_degree": bstree.degree(g, g.base)})
    if cfg.dot is None:
        return tb.to_dot(g)
    return "\n".join(f"{r}\t{c}" for r, c in enumerate(spheres)) + "\n"


def _point_dict(pt: dict) -> dict:
    out = {}
    for k, v in pt.items():
        if k == "tree":
            out[k] = [[list(r), e[0], e[1]] for r, e in v]
        elif k == "translation":
            out[k] = [fmt_rational(x) for x in v]
        elif k == "free":
            out[k] = [[e, s] for e, s in v]
        elif k == "hyperbolic":
            out[k] = [v.real, v.imag]
        else:
            vec, h = v
            out[k] = {"vector": [float(x) for x in vec], "height": h}
    return out


def _cmd_embed(g, cfg) -> str:
    emap = embed.make_map(g, cfg.case, p=float(Fraction(cfg.p)))
    w = words.parse_word(g, cfg.word or "")
    doc = {"case": cfg.case, "word": cfg.word or "", "point": _point_dict(embed.embed_point(emap, w))}
    if cfg.json:
        return _dump(doc)
    return "\n".join(f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in doc["point"].items()) + "\n"


def _cmd_compression(g, cfg) -> str:
    emap = embed.make_map(g, cfg.case, p=float(Fraction(cfg.p)))
    est = embed.estimate_compression(emap, cfg.radius, seed=cfg.seed,
                                     b=words.ball(g, cfg.radius, cap=cfg.cap))
    if cfg.csv:
        with open(cfg.csv, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh)
            wr.writerow(["r", "rho_hat"])
            for r, v in est.profile:
                wr.writerow([r, repr(v)])
    if cfg.json:
        return _dump(est.as_dict())
    return (f"fitted exponent: {est.exponent:.4f} band [{est.band[0]:.4f}, {est.band[1]:.4f}]"
            f" raw slope {est.raw_slope:.4f}\npairs: {est.n_pairs} seed: {est.seed}\n")


def _cmd_properness(g, cfg) -> str:
    emap = embed.make_map(g, cfg.case, p=float(Fraction(cfg.p)))
    prof = embed.properness_profile(emap, cfg.radius, words.ball(g, cfg.radius, cap=cfg.cap))
    if cfg.json:
        return _dump({"case": cfg.case, "radius": cfg.radius, "profile": prof})
    return "\n".join(f"{r}\t{v:.6f}" for r, v in enumerate(prof)) + "\n"


_DISPATCH = {"analyze": _cmd_analyze, "mu": _cmd_mu, "nf": _cmd_nf, "ball": _cmd_ball,
             "tree-ball": _cmd_tree_ball, "embed": _cmd_embed, "compression": _cmd_compression,
             "properness": _cmd_properness}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    for name in ("depth", "precision_bits", "cap"):
        if getattr(cfg, name) <= 0:
            err.write(f"error: --{name.replace('_', '-')} must be positive\n")
            return EXIT_INVALID
    if cfg.radius < 0:
        err.write("error: --radius must be nonnegative\n")
        return EXIT_INVALID
    try:
        g = _load(cfg)
        text = _DISPATCH[cfg.subcommand](g, cfg)
    except words.ResourceLimit as exc:
        err.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE
    except gog.ParseError as exc:
        err.write(f"ParseError: {exc}\n")
        return EXIT_INVALID
    except (gog.GBSError, MalformedWord, embed.NotApplicable, OSError, ValueError) as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_INVALID
    out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gbs", description="Generalized Baumslag-Solitar groups")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        if name == "nf":
            sp.add_argument("word", help="word such as 't * b^2 * t^-1'")
        sp.add_argument("input", nargs="?", help="graph-of-groups document")
        sp.add_argument("--input", dest="input_opt", help="graph-of-groups document")
        sp.add_argument("--builtin", help="bs:M,N | heisenberg | z2-f2 | tree-amalgam:ENTRIES")
        sp.add_argument("--depth", type=int, default=verdicts.DEFAULT_DEPTH)
        sp.add_argument("--radius", type=int, default=4)
        sp.add_argument("--p", default="2")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--precision-bits", type=int, default=ratlin.DEFAULT_PRECISION_CAP)
        sp.add_argument("--cap", type=int, default=words.DEFAULT_BALL_CAP,
                        help="maximum number of ball elements or tree vertices")
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--dot")
        sp.add_argument("--csv")
        sp.add_argument("--case", choices=embed.CASES, default="generic")
        if name != "nf":
            sp.add_argument("--word")
    return parser


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.input and ns.input_opt:
        raise SystemExit("give the input file once")
    return RunConfig(ns.subcommand, ns.input or ns.input_opt, ns.builtin, ns.depth, ns.radius,
                     ns.p, ns.seed, ns.precision_bits, ns.json, ns.dot, ns.csv, ns.case, ns.word,
                     ns.cap)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_OK
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
