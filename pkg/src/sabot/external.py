"""Child-process expensive evaluator speaking a newline-delimited protocol.

One request per line on the child's stdin: ``{"x": [<reals>]}``.
One response per line on its stdout: ``{"f": [<reals>]}`` or
``{"f": [<reals>], "g": [<reals>]}``. A line starting with ``{"error":``
signals evaluator-side failure.
"""

from __future__ import annotations

import json
import queue
import shlex
import subprocess
import threading

import numpy as np

from .core import Evaluation, Problem, ProblemSpec, Provenance
from .errors import EvaluatorCrashed, EvaluatorTimeout, ProtocolError


class ExternalEvaluator(Problem):
    """Problem whose expensive evaluation is delegated to a child process."""

    def __init__(self, spec: ProblemSpec, command, timeout: float = 60.0):
        super().__init__(spec)
        if isinstance(command, str):
            command = shlex.split(command)
        self.command = command
        self.timeout = timeout
        self._proc = subprocess.Popen(
            command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        self._lines: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._drain, daemon=True)
        self._reader.start()

    def _drain(self):
        for line in self._proc.stdout:
            self._lines.put(line)
        self._lines.put(None)  # EOF sentinel

    def _evaluate(self, x: np.ndarray):
        if self._proc.poll() is not None:
            raise EvaluatorCrashed(f"evaluator exited with code {self._proc.returncode}")
        request = json.dumps({"x": [float(v) for v in x]})
        try:
            self._proc.stdin.write(request + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise EvaluatorCrashed("evaluator pipe closed") from exc
        try:
            line = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            raise EvaluatorTimeout(f"no response within {self.timeout}s")
        if line is None:
            raise EvaluatorCrashed("evaluator closed its output stream")
        return self._parse(line)

    def _parse(self, line: str):
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"malformed response line: {line!r}") from exc
        if not isinstance(payload, dict):
            raise ProtocolError(f"response is not an object: {line!r}")
        if "error" in payload:
            raise ProtocolError(f"evaluator reported error: {payload['error']}")
        if "f" not in payload:
            raise ProtocolError(f"response missing 'f': {line!r}")
        try:
            f = np.asarray(payload["f"], dtype=float)
            g = np.asarray(payload.get("g", []), dtype=float)
        except (TypeError, ValueError) as exc:
            raise ProtocolError(f"non-numeric response field: {line!r}") from exc
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(g))):
            raise ProtocolError(f"non-finite response values: {line!r}")
        if f.size != self.spec.n_obj or g.size != self.spec.n_constr:
            raise ProtocolError(
                f"expected {self.spec.n_obj} objectives and {self.spec.n_constr} "
                f"constraints, got {f.size} and {g.size}"
            )
        return f, g

    def external_evaluate(self, x) -> Evaluation:
        """Single request/response round-trip, tagged as an expensive result."""
        f, g = self._evaluate(np.asarray(x, dtype=float))
        self.n_calls += 1
        return Evaluation(f=f, g=g, provenance=Provenance.EXPENSIVE)

    def close(self):
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
