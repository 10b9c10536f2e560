import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent / "src"))

from cli import run  # noqa: E402

if __name__ == '__main__':
    sys.exit(run(sys.argv[1:]))
