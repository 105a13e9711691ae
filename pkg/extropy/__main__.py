"""Allow ``python -m extropy``."""
import sys

from extropy.cli import main

sys.exit(main())
