import sys

from screentest.cli import main

sys.exit(main())
