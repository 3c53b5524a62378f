import sys
sys.stdin.read()
raise RuntimeError('boom')
