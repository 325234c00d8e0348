"""Knowledge graph toolkit for natural product-drug interaction discovery.

Build an ontology-grounded graph plus a literature graph from predications,
close it under symmetric/transitive rules, then query it for paths and
meta-paths and score it against curated interactions.
"""
__version__ = "0.1.0"
