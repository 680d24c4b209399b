import sys

from bdcbounds.cli import main

sys.exit(main())
