import sys

from cuf.cli.main import main

sys.exit(main())
