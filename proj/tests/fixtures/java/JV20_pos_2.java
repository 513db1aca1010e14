// expect: JV20@6 JV20@7
public class Pair {
    private int _sum;

    public void add() {
        int a = 0, b = 1, c = 2;
        double x = 0.0, y = 1.0;
        _sum = a + b + c;
    }
}
