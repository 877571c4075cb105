import sys

from pynearfield.cli import main


sys.exit(main())
