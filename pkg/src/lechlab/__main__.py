import sys

from lechlab.cli import main

sys.exit(main())
