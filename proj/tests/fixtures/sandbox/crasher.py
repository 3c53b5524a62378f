import sys
sys.stdin.read()
open('scratch.txt', 'w').write('junk')
raise SystemExit(9)
