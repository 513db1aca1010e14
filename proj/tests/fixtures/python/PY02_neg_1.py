# expect: none
def main():
    print(pick())

def pick():
    return input()

while True:
    main()
    break
