import sys

from approx_discontinuity.cli import main

if __name__ == "__main__":
    sys.exit(main())
