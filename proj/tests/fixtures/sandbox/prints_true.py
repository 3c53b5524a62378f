import sys
sys.stdin.read()
print(True)
