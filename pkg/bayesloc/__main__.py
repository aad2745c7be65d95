import sys

from bayesloc.cli.main import main

sys.exit(main())
