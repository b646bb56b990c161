import sys

from changeaccel.main import main

sys.exit(main())
