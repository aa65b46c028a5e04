"""Dynamic graph algorithms under oblivious and adaptive adversaries.

Modules: ``graph`` (bitset graphs), ``bmm`` (witness products), ``triangles``
(triangle values and balanced triangle sets), ``decr_triangle``, ``mis``,
``connectivity``, ``clique``, ``reductions``, ``generators``, ``harness``,
``oracles`` (brute-force ground truth) and ``cli``.
"""
