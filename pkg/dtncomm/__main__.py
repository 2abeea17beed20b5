import sys

from dtncomm.cli import main

sys.exit(main())
