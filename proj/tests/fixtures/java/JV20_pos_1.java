// expect: JV20@6
public class Pair {
    private int _sum;

    public void add() {
        int a, b;
        a = 1;
        b = 2;
        _sum = a + b;
    }
}
