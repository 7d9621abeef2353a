import sys

from gammacat.cli import main

sys.exit(main())
