// expect: JV07@5
public class Car {
    private int _fuel;

    public boolean isEmpty() {
        if (_fuel == 0) {
            return true;
        }
        return false;
    }
}
