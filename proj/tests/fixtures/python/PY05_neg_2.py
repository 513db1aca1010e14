# expect: none
def main():
    show()

def show():
    print("ok")

if __name__ == "__main__":
    main()
