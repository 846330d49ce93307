#include "hygrid/network.hpp"

namespace hygrid::net {

// Baran-Wu 33-bus feeder. Branch impedances in ohms, loads on the `to`
// bus in kW/kvar. Load-class tags are a working assignment: the large
// commercial loads are critical, mid-size mixed, the rest non-critical.
const char* builtin_ieee33_text() {
    return
        "# v_base_kv,s_base_mva\n"
        "12.66,10\n"
        "# from,to,r_ohm,x_ohm,p_kw,q_kvar,load_class\n"
        "1,2,0.0922,0.0470,100,60,moderately-critical\n"
        "2,3,0.4930,0.2511,90,40,non-critical\n"
        "3,4,0.3660,0.1864,120,80,moderately-critical\n"
        "4,5,0.3811,0.1941,60,30,non-critical\n"
        "5,6,0.8190,0.7070,60,20,non-critical\n"
        "6,7,0.1872,0.6188,200,100,critical\n"
        "7,8,0.7114,0.2351,200,100,critical\n"
        "8,9,1.0300,0.7400,60,20,non-critical\n"
        "9,10,1.0440,0.7400,60,20,non-critical\n"
        "10,11,0.1966,0.0650,45,30,non-critical\n"
        "11,12,0.3744,0.1238,60,35,non-critical\n"
        "12,13,1.4680,1.1550,60,35,moderately-critical\n"
        "13,14,0.5416,0.7129,120,80,moderately-critical\n"
        "14,15,0.5910,0.5260,60,10,non-critical\n"
        "15,16,0.7463,0.5450,60,20,non-critical\n"
        "16,17,1.2890,1.7210,60,20,non-critical\n"
        "17,18,0.7320,0.5740,90,40,moderately-critical\n"
        "2,19,0.1640,0.1565,90,40,non-critical\n"
        "19,20,1.5042,1.3554,90,40,non-critical\n"
        "20,21,0.4095,0.4784,90,40,non-critical\n"
        "21,22,0.7089,0.9373,90,40,non-critical\n"
        "3,23,0.4512,0.3083,90,50,non-critical\n"
        "23,24,0.8980,0.7091,420,200,critical\n"
        "24,25,0.8960,0.7011,420,200,critical\n"
        "6,26,0.2030,0.1034,60,25,non-critical\n"
        "26,27,0.2842,0.1447,60,25,non-critical\n"
        "27,28,1.0590,0.9337,60,20,non-critical\n"
        "28,29,0.8042,0.7006,120,70,moderately-critical\n"
        "29,30,0.5075,0.2585,200,600,critical\n"
        "30,31,0.9744,0.9630,150,70,moderately-critical\n"
        "31,32,0.3105,0.3619,210,100,moderately-critical\n"
        "32,33,0.3410,0.5302,60,40,non-critical\n";
}

}  // namespace hygrid::net
