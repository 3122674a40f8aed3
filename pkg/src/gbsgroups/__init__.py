"""Generalized Baumslag-Solitar groups: graphs of Z^n groups, the modular
homomorphism, normal forms, the Bass-Serre tree, verdicts and embeddings."""
from .gog import GBSData, builtin, parse, parse_builtin_spec, render
from .modmap import compute_modular, mu_eval
from .words import normal_form, parse_word

__all__ = ["GBSData", "builtin", "parse", "parse_builtin_spec", "render", "compute_modular",
           "mu_eval", "normal_form", "parse_word"]
__version__ = "0.1.0"
