"""
Copyright (c) 2024 gdnce authors - All Rights Reserved.
"""

import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

sys.path.append(ROOT)
sys.path.append(os.path.join(ROOT, "src"))
