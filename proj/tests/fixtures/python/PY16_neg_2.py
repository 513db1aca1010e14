# expect: none
def main():
    print(adjust(0, 1))

def adjust(a, b):
    return a * 2 - b + -1 + 2.0 * 0.0

main()
