"""
Driving the command-line tool
=============================

The ``emknot`` program wraps the library. Here it is called in-process to
write a VTK grid, propagate it and print the closed-form comparison.
"""

import json
import tempfile
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path

from emknot.cli import main

with tempfile.TemporaryDirectory() as tmp:
    grid = Path(tmp) / "hopfion.vtk"
    main(["fields", "--n", "32", "--extent", "8", "--time", "0", "--out", str(grid)])
    print(grid.read_text().splitlines()[:8])

    buf = StringIO()
    with redirect_stdout(buf):
        code = main(["propagate", "--input", str(grid), "--project", "--time", "1", "--check-closed-form", "--tol", "0.05"])
    report = json.loads(buf.getvalue())
    print("exit code", code, "error", report["results"][0]["relative_l2_error_inner"])
