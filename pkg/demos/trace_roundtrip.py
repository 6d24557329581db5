"""Write a trace, replay it against brute force, and run the same file via the CLI."""
import io
import subprocess
import sys
import tempfile

from kinrange.harness import format_trace, parse_trace, random_scenario, run_scenario

s = random_scenario(4, n=64, U=1024, queries=6, ops=4)
text = format_trace(s)
print(text.splitlines()[0], "...", f"({len(text.splitlines())} lines)")

rep = run_scenario(parse_trace(io.StringIO(text)), "diff")
print("\n".join(rep.lines()[:12]))

with tempfile.NamedTemporaryFile("w", suffix=".trace", delete=False) as f:
    f.write(text)
out = subprocess.run([sys.executable, "-m", "kinrange", "--trace", f.name, "--mode", "diff"],
                     capture_output=True, text=True)
print("CLI exit code", out.returncode, "- same report:", out.stdout.splitlines() == rep.lines())
