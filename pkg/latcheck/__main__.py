import sys

from latcheck.cli import main

sys.exit(main())
