import sys
from trapbound.cli import main

sys.exit(main())
