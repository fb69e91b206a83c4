"""Irregular prime scanner: Bernoulli numbers mod p with exact NTT convolutions."""

__version__ = "0.1.0"
