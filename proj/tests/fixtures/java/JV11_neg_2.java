// expect: none
public class Shape {
    private int _sides;

    public int area(Shape other) {
        return _sides * other.sides();
    }

    public int sides() {
        return _sides;
    }
}
