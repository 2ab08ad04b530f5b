"""Run the eleven acceptance checks and print one line per criterion."""
import importlib.util
import pathlib
import sys

path = pathlib.Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"
spec = importlib.util.spec_from_file_location("test_acceptance", path)
mod = importlib.util.module_from_spec(spec)
spec.loader.exec_module(mod)

wanted = {int(a) for a in sys.argv[1:]} or set(range(1, 12))
results = [check() for i, check in enumerate(mod.CHECKS, start=1) if i in wanted]
print(f"{sum(results)}/{len(results)} criteria pass")
sys.exit(0 if all(results) else 1)
