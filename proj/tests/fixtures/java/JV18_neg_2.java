// expect: none
public class Printer {
    private int _n;

    public void print() {
        for (int i = 0; i < _n; i++) {
            for (int j = 0; j < i; j++) {
                System.out.println(j);
            }
        }
    }
}
