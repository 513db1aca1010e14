// expect: none
public class Balloon {
    private static final double MAX_RADIUS = 10.0;
    private double _radius;
}
