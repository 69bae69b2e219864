name="theta-lab"
