"""
Global pytest configuration for idpath tests.
Handles import path setup for both local and CI environments.
"""

import sys
from pathlib import Path

# Add the project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))
