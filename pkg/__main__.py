import sys

from imbessel.cli import main

sys.exit(main())
