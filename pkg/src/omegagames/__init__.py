"""Effective constructions around coded Gale-Stewart games on omega-words:
lasso membership engines, the h/alpha, phi and theta codings, the R1/R2
two-tape automata, strategy transfer and a property-suite runner."""

__version__ = "0.1.0"
