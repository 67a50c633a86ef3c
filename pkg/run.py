import sys
import os

# Add the current directory to sys.path so we can import 'src'
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

try:
    from src.main import main
except ImportError as e:
    print(f"Failed to start dihedral4: {e}", file=sys.stderr)
    sys.exit(2)

if __name__ == "__main__":
    sys.exit(main())
