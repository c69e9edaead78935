"""Echo evaluator: returns the design vector as its objective values."""

from . import serve

if __name__ == "__main__":
    serve(lambda x: {"f": list(x)})
