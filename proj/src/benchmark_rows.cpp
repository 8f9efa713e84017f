#include <map>
#include <string>
#include <vector>

#include "causal_atlas/selector.hpp"

namespace causal_atlas {

// Measured with measure_benchmark_rows over the default grids, seeds 100-104.
std::map<std::string, std::vector<BenchmarkRow>> embedded_benchmark_rows() {
    std::map<std::string, std::vector<BenchmarkRow>> rows;
    rows["direct_lingam"] = {
        {"tabular_grid/linear,gaussian,discrete=0.2", {1000, 10, 0.31428571428571433, 1, 1}, 0.18891774891774893, 0.2574865554},
        {"tabular_grid/linear,gaussian,ep=0.22,p=10", {1000, 10, 0.27111111111111114, 1, 1}, 0.4125017011973534, 0.0800098844},
        {"tabular_grid/linear,gaussian,ep=0.22,p=25", {1000, 25, 0.4013333333333334, 1, 1}, 0.28558842830979675, 1.5439879688},
        {"tabular_grid/linear,gaussian,ep=0.5,p=10", {1000, 10, 0.6888888888888889, 1, 1}, 0.3327150990331165, 0.06145262920000001},
        {"tabular_grid/linear,gaussian,ep=0.5,p=25", {1000, 25, 0.692, 1, 1}, 0.4246116043853917, 0.9032503787999999},
        {"tabular_grid/linear,uniform,ep=0.22,p=10", {1000, 10, 0.28888888888888886, 1, 0}, 0.9395173453996983, 0.054314330200000004},
        {"tabular_grid/linear,uniform,ep=0.22,p=25", {1000, 25, 0.39866666666666667, 1, 1}, 0.9192283675443178, 0.8517209872},
        {"tabular_grid/linear,uniform,ep=0.5,p=10", {1000, 10, 0.6755555555555555, 1, 0.4}, 0.970013263166902, 0.0539339024},
        {"tabular_grid/linear,uniform,ep=0.5,p=25", {1000, 25, 0.6839999999999999, 1, 1}, 0.9603636214051671, 0.9117753268},
        {"tabular_grid/mlp,gaussian,ep=0.22,p=10", {1000, 10, 0.32, 0.8, 0.2}, 0.17491919191919192, 0.0571452486},
        {"tabular_grid/mlp,gaussian,ep=0.22,p=25", {1000, 25, 0.276, 1, 0.2}, 0.24478098714426322, 0.8541110185999999},
        {"tabular_grid/mlp,gaussian,ep=0.5,p=10", {1000, 10, 0.5022222222222222, 1, 0.2}, 0.2785838741605178, 0.050257447},
        {"tabular_grid/mlp,gaussian,ep=0.5,p=25", {1000, 25, 0.4686666666666667, 1, 0}, 0.32968832379676305, 1.3303303746000001},
        {"tabular_grid/mlp,uniform,ep=0.22,p=10", {1000, 10, 0.27999999999999997, 1, 0}, 0.3054308264834581, 0.090529473},
        {"tabular_grid/mlp,uniform,ep=0.22,p=25", {1000, 25, 0.268, 1, 0}, 0.28476735400338093, 1.7294322546000003},
        {"tabular_grid/mlp,uniform,ep=0.5,p=10", {1000, 10, 0.6222222222222222, 1, 0}, 0.3817914562674282, 0.1158424076},
        {"tabular_grid/mlp,uniform,ep=0.5,p=25", {1000, 25, 0.46799999999999997, 1, 0.2}, 0.3439688991254208, 1.2618273066},
    };
    rows["dynotears"] = {
        {"ts_grid/gaussian,p=10", {1000, 10, std::nullopt, 1, 1}, 0.9404369717754599, 0.39217368199999997},
        {"ts_grid/gaussian,p=5", {1000, 5, std::nullopt, 1, 1}, 0.9386666666666666, 0.05695583},
        {"ts_grid/uniform,p=10", {1000, 10, std::nullopt, 1, 0}, 0.9170178610055313, 0.28739137099999995},
        {"ts_grid/uniform,p=5", {1000, 5, std::nullopt, 1, 0}, 0.93, 0.0589241358},
    };
    rows["granger_multivariate"] = {
        {"ts_grid/gaussian,p=10", {1000, 10, std::nullopt, 1, 1}, 0.8102172672779879, 0.23121714559999998},
        {"ts_grid/gaussian,p=5", {1000, 5, std::nullopt, 1, 1}, 0.9165852665852666, 0.0193162026},
        {"ts_grid/uniform,p=10", {1000, 10, std::nullopt, 1, 0}, 0.8009455952852178, 0.1957001236},
        {"ts_grid/uniform,p=5", {1000, 5, std::nullopt, 1, 0}, 0.9153483038700431, 0.016295255399999996},
    };
    rows["granger_pairwise"] = {
        {"ts_grid/gaussian,p=10", {1000, 10, std::nullopt, 1, 1}, 0.630680381262573, 0.0341951446},
        {"ts_grid/gaussian,p=5", {1000, 5, std::nullopt, 1, 1}, 0.8336098617357987, 0.011410938200000002},
        {"ts_grid/uniform,p=10", {1000, 10, std::nullopt, 1, 0}, 0.6071883378814072, 0.0331410592},
        {"ts_grid/uniform,p=5", {1000, 5, std::nullopt, 1, 0}, 0.8424008027567538, 0.010181213599999999},
    };
    rows["iamb"] = {
        {"tabular_grid/linear,gaussian,discrete=0.2", {1000, 10, 0.31428571428571433, 1, 1}, 0.6024159375420649, 0.008938607800000001},
        {"tabular_grid/linear,gaussian,ep=0.22,p=10", {1000, 10, 0.27111111111111114, 1, 1}, 0.7680895140664962, 0.0016813557999999999},
        {"tabular_grid/linear,gaussian,ep=0.22,p=25", {1000, 25, 0.4013333333333334, 1, 1}, 0.22971303255153463, 2.63591413},
        {"tabular_grid/linear,gaussian,ep=0.5,p=10", {1000, 10, 0.6888888888888889, 1, 1}, 0.49333333333333335, 0.0068125808},
        {"tabular_grid/linear,gaussian,ep=0.5,p=25", {1000, 25, 0.692, 1, 1}, 0.0028776978417266183, 0.8126512112000001},
        {"tabular_grid/linear,uniform,ep=0.22,p=10", {1000, 10, 0.28888888888888886, 1, 0}, 0.7813422459893047, 0.0015155446},
        {"tabular_grid/linear,uniform,ep=0.22,p=25", {1000, 25, 0.39866666666666667, 1, 1}, 0.2566471556612402, 0.4596440058},
        {"tabular_grid/linear,uniform,ep=0.5,p=10", {1000, 10, 0.6755555555555555, 1, 0.4}, 0.4419280682239525, 0.0080233244},
        {"tabular_grid/linear,uniform,ep=0.5,p=25", {1000, 25, 0.6839999999999999, 1, 1}, 0.0028985507246376808, 1.8145287567999997},
        {"tabular_grid/mlp,gaussian,ep=0.22,p=10", {1000, 10, 0.32, 0.8, 0.2}, 0.4688888888888888, 0.0026209778},
        {"tabular_grid/mlp,gaussian,ep=0.22,p=25", {1000, 25, 0.276, 1, 0.2}, 0.4522831468107393, 1.2358384454},
        {"tabular_grid/mlp,gaussian,ep=0.5,p=10", {1000, 10, 0.5022222222222222, 1, 0.2}, 0.3530226225387516, 0.0049959336},
        {"tabular_grid/mlp,gaussian,ep=0.5,p=25", {1000, 25, 0.4686666666666667, 1, 0}, 0.22280854105546394, 36.1282146782},
        {"tabular_grid/mlp,uniform,ep=0.22,p=10", {1000, 10, 0.27999999999999997, 1, 0}, 0.4578181818181818, 0.0028942986},
        {"tabular_grid/mlp,uniform,ep=0.22,p=25", {1000, 25, 0.268, 1, 0}, 0.416666639538316, 3.603207818},
        {"tabular_grid/mlp,uniform,ep=0.5,p=10", {1000, 10, 0.6222222222222222, 1, 0}, 0.3936462268720333, 0.016294758},
        {"tabular_grid/mlp,uniform,ep=0.5,p=25", {1000, 25, 0.46799999999999997, 1, 0.2}, 0.21104534840005076, 38.186283255},
    };
    rows["notears_linear"] = {
        {"tabular_grid/linear,gaussian,discrete=0.2", {1000, 10, 0.31428571428571433, 1, 1}, 0.6980434782608695, 0.5914085866},
        {"tabular_grid/linear,gaussian,ep=0.22,p=10", {1000, 10, 0.27111111111111114, 1, 1}, 0.9633867276887873, 0.2038572742},
        {"tabular_grid/linear,gaussian,ep=0.22,p=25", {1000, 25, 0.4013333333333334, 1, 1}, 0.870373268309893, 2.552661869},
        {"tabular_grid/linear,gaussian,ep=0.5,p=10", {1000, 10, 0.6888888888888889, 1, 1}, 0.8042363460320117, 0.2322014582},
        {"tabular_grid/linear,gaussian,ep=0.5,p=25", {1000, 25, 0.692, 1, 1}, 0.6305285762401167, 1.8460058166},
        {"tabular_grid/linear,uniform,ep=0.22,p=10", {1000, 10, 0.28888888888888886, 1, 0}, 0.9633867276887873, 0.1360787338},
        {"tabular_grid/linear,uniform,ep=0.22,p=25", {1000, 25, 0.39866666666666667, 1, 1}, 0.885675053900268, 1.4286595623999998},
        {"tabular_grid/linear,uniform,ep=0.5,p=10", {1000, 10, 0.6755555555555555, 1, 0.4}, 0.7977825645194067, 0.2169730032},
        {"tabular_grid/linear,uniform,ep=0.5,p=25", {1000, 25, 0.6839999999999999, 1, 1}, 0.6420383714172002, 1.773388173},
        {"tabular_grid/mlp,gaussian,ep=0.22,p=10", {1000, 10, 0.32, 0.8, 0.2}, 0.7166728008833271, 0.21680933800000002},
        {"tabular_grid/mlp,gaussian,ep=0.22,p=25", {1000, 25, 0.276, 1, 0.2}, 0.5172828403932674, 1.4666460178},
        {"tabular_grid/mlp,gaussian,ep=0.5,p=10", {1000, 10, 0.5022222222222222, 1, 0.2}, 0.5544848737735195, 0.1758046804},
        {"tabular_grid/mlp,gaussian,ep=0.5,p=25", {1000, 25, 0.4686666666666667, 1, 0}, 0.3955003933167015, 2.338328621},
        {"tabular_grid/mlp,uniform,ep=0.22,p=10", {1000, 10, 0.27999999999999997, 1, 0}, 0.5643809523809523, 0.24393961819999999},
        {"tabular_grid/mlp,uniform,ep=0.22,p=25", {1000, 25, 0.268, 1, 0}, 0.5545426303989865, 3.1107090844},
        {"tabular_grid/mlp,uniform,ep=0.5,p=10", {1000, 10, 0.6222222222222222, 1, 0}, 0.5854164145997177, 0.5168722162},
        {"tabular_grid/mlp,uniform,ep=0.5,p=25", {1000, 25, 0.46799999999999997, 1, 0.2}, 0.3926246610866701, 2.5194097388},
    };
    rows["pc"] = {
        {"tabular_grid/linear,gaussian,discrete=0.2", {1000, 10, 0.31428571428571433, 1, 1}, 0.5696470588235294, 0.0036772873999999997},
        {"tabular_grid/linear,gaussian,ep=0.22,p=10", {1000, 10, 0.27111111111111114, 1, 1}, 0.7807777777777778, 0.0016950692},
        {"tabular_grid/linear,gaussian,ep=0.22,p=25", {1000, 25, 0.4013333333333334, 1, 1}, 0.38234591495461057, 0.019254002},
        {"tabular_grid/linear,gaussian,ep=0.5,p=10", {1000, 10, 0.6888888888888889, 1, 1}, 0.47317244846656614, 0.0018566662000000002},
        {"tabular_grid/linear,gaussian,ep=0.5,p=25", {1000, 25, 0.692, 1, 1}, 0.12308344392188053, 0.023693869800000003},
        {"tabular_grid/linear,uniform,ep=0.22,p=10", {1000, 10, 0.28888888888888886, 1, 0}, 0.7110808080808081, 0.0008420789999999999},
        {"tabular_grid/linear,uniform,ep=0.22,p=25", {1000, 25, 0.39866666666666667, 1, 1}, 0.3588406317518721, 0.0113642462},
        {"tabular_grid/linear,uniform,ep=0.5,p=10", {1000, 10, 0.6755555555555555, 1, 0.4}, 0.4122958568779002, 0.0019576598},
        {"tabular_grid/linear,uniform,ep=0.5,p=25", {1000, 25, 0.6839999999999999, 1, 1}, 0.09618434946589091, 0.029213228799999998},
        {"tabular_grid/mlp,gaussian,ep=0.22,p=10", {1000, 10, 0.32, 0.8, 0.2}, 0.5150877192982456, 0.0007766324},
        {"tabular_grid/mlp,gaussian,ep=0.22,p=25", {1000, 25, 0.276, 1, 0.2}, 0.3678764455392908, 0.0081168706},
        {"tabular_grid/mlp,gaussian,ep=0.5,p=10", {1000, 10, 0.5022222222222222, 1, 0.2}, 0.41927244582043344, 0.0011959921999999997},
        {"tabular_grid/mlp,gaussian,ep=0.5,p=25", {1000, 25, 0.4686666666666667, 1, 0}, 0.20463215926471262, 0.0374115894},
        {"tabular_grid/mlp,uniform,ep=0.22,p=10", {1000, 10, 0.27999999999999997, 1, 0}, 0.4191232841232841, 0.0020349534},
        {"tabular_grid/mlp,uniform,ep=0.22,p=25", {1000, 25, 0.268, 1, 0}, 0.35985237543566356, 0.0155611682},
        {"tabular_grid/mlp,uniform,ep=0.5,p=10", {1000, 10, 0.6222222222222222, 1, 0}, 0.41718236012353654, 0.0031471388},
        {"tabular_grid/mlp,uniform,ep=0.5,p=25", {1000, 25, 0.46799999999999997, 1, 0.2}, 0.2099892611243756, 0.0360187984},
    };
    rows["score_search"] = {
        {"tabular_grid/linear,gaussian,discrete=0.2", {1000, 10, 0.31428571428571433, 1, 1}, 0.6355227469354278, 0.0010718716},
        {"tabular_grid/linear,gaussian,ep=0.22,p=10", {1000, 10, 0.27111111111111114, 1, 1}, 0.5771596638655462, 0.0007439284000000001},
        {"tabular_grid/linear,gaussian,ep=0.22,p=25", {1000, 25, 0.4013333333333334, 1, 1}, 0.42667768992144417, 0.032266816200000006},
        {"tabular_grid/linear,gaussian,ep=0.5,p=10", {1000, 10, 0.6888888888888889, 1, 1}, 0.4618124092888244, 0.0013369686},
        {"tabular_grid/linear,gaussian,ep=0.5,p=25", {1000, 25, 0.692, 1, 1}, 0.33742652864937633, 0.0364979302},
        {"tabular_grid/linear,uniform,ep=0.22,p=10", {1000, 10, 0.28888888888888886, 1, 0}, 0.463543018406763, 0.00047614760000000005},
        {"tabular_grid/linear,uniform,ep=0.22,p=25", {1000, 25, 0.39866666666666667, 1, 1}, 0.4342856507482896, 0.018788785199999998},
        {"tabular_grid/linear,uniform,ep=0.5,p=10", {1000, 10, 0.6755555555555555, 1, 0.4}, 0.5754161128767268, 0.0008844696000000001},
        {"tabular_grid/linear,uniform,ep=0.5,p=25", {1000, 25, 0.6839999999999999, 1, 1}, 0.3941294216312886, 0.051392405200000005},
        {"tabular_grid/mlp,gaussian,ep=0.22,p=10", {1000, 10, 0.32, 0.8, 0.2}, 0.6369437106279212, 0.0005570064},
        {"tabular_grid/mlp,gaussian,ep=0.22,p=25", {1000, 25, 0.276, 1, 0.2}, 0.40594767375047347, 0.0093805814},
        {"tabular_grid/mlp,gaussian,ep=0.5,p=10", {1000, 10, 0.5022222222222222, 1, 0.2}, 0.3984235760907425, 0.0006488064},
        {"tabular_grid/mlp,gaussian,ep=0.5,p=25", {1000, 25, 0.4686666666666667, 1, 0}, 0.4079851419966641, 0.0324295632},
        {"tabular_grid/mlp,uniform,ep=0.22,p=10", {1000, 10, 0.27999999999999997, 1, 0}, 0.553860153256705, 0.0009984634000000001},
        {"tabular_grid/mlp,uniform,ep=0.22,p=25", {1000, 25, 0.268, 1, 0}, 0.42595765455946966, 0.020671993},
        {"tabular_grid/mlp,uniform,ep=0.5,p=10", {1000, 10, 0.6222222222222222, 1, 0}, 0.5419264818289209, 0.001659584},
        {"tabular_grid/mlp,uniform,ep=0.5,p=25", {1000, 25, 0.46799999999999997, 1, 0.2}, 0.3687795413829707, 0.0264364158},
    };
    rows["var_lingam"] = {
        {"ts_grid/gaussian,p=10", {1000, 10, std::nullopt, 1, 1}, 0.7035892078615398, 0.2951791138},
        {"ts_grid/gaussian,p=5", {1000, 5, std::nullopt, 1, 1}, 0.8321863799283153, 0.037224197800000004},
        {"ts_grid/uniform,p=10", {1000, 10, std::nullopt, 1, 0}, 0.7555589724285376, 0.254293447},
        {"ts_grid/uniform,p=5", {1000, 5, std::nullopt, 1, 0}, 0.8822344322344323, 0.0353722644},
    };
    return rows;
}

}  // namespace causal_atlas
