// expect: JV07@5 JV11@6
public class Shape {
    private int _sides;

    public boolean same(Object other) {
        if (other instanceof Shape) {
            return true;
        }
        return false;
    }
}
