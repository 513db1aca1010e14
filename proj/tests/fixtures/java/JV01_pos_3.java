// expect: JV01@7
// options: nested
public class Garage {
    private int _size;

    static class Car {
        public int _fuel;
    }
}
