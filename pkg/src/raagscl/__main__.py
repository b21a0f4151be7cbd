import sys

from raagscl.main import main

sys.exit(main())
