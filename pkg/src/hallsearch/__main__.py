import sys

from hallsearch.cli import main

sys.exit(main())
