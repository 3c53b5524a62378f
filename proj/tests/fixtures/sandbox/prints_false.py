import sys
sys.stdin.read()
print(False)
