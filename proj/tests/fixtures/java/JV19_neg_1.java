// expect: none
public class Evens {
    private int _n;

    public void print() {
        for (int i = 0; i < _n; i++) {
            System.out.println(i);
        }
    }
}
