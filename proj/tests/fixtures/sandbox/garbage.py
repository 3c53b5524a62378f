import sys
sys.stdin.read()
print('maybe?')
