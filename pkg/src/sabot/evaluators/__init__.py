"""Bundled reference evaluators for the newline-delimited child-process
protocol; run them with ``python -m sabot.evaluators.<name>``."""

import json
import sys


def serve(evaluate):
    """Answer one request line at a time until stdin closes."""
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            x = json.loads(line)["x"]
            response = evaluate(x)
        except Exception as exc:  # report instead of dying mid-protocol
            response = {"error": str(exc)}
        sys.stdout.write(json.dumps(response) + "\n")
        sys.stdout.flush()
