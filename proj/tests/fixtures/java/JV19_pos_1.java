// expect: JV19@6
public class Evens {
    private int _n;

    public void print() {
        for (int i = 0; i < _n; i += 2) {
            System.out.println(i);
        }
    }
}
