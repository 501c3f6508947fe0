// Apache License, Version 2.0, refer to LICENSE.txt

int main(){ return 0; }
