"""Sphere evaluator: f(x) = sum of squares."""

from . import serve

if __name__ == "__main__":
    serve(lambda x: {"f": [sum(v * v for v in x)]})
