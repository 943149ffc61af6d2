import sys

from randzono.cli import main

sys.exit(main())
