import sys

from krull_forge.cli import main

sys.exit(main())
