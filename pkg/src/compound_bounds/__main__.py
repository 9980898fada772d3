import sys

from compound_bounds.cli import main

sys.exit(main())
