import sys, os, json
doc = json.load(sys.stdin)
with open('scratch.txt', 'w') as f:
    f.write(json.dumps(doc))
with open('scratch.txt') as f:
    back = json.loads(f.read())
print(os.path.basename(os.getcwd()) != '' and back == doc)
