#include "towerdensity/reference_table.hpp"

namespace towerdensity {

namespace {

constexpr ReferenceRow kRows[] = {
    {2, 25000, 20, 20,
     "0.577350376056807813001171222749099027793826886470544627211675882194082714",
     "0.577350485047678584952747233500637548585202776756754996491063963297074978", nullptr},
    {3, 6000, 100, 100,
     "0.388807379263994405608",
     "0.388807379271511226974", nullptr},
    {5, 5000, 100, 100,
     "0.2151189846955856203278886157360448757908",
     "0.2151189846955856203310804143009889413781", nullptr},
    {7, 2500, 100, 100,
     "0.1465008912284380428191169151038108078952016850611",
     "0.1465008912284380428191169151051370285686287787482",
     "reference digits match a 5000-prime pool, not the stated p=2500"},
    {11, 2000, 200, 200,
     "0.09113458105567412165027231631480880531869134253505",
     "0.09113458105567412165027231631480880531869134616405", nullptr},
    {13, 2000, 200, 200,
     "0.0769798105202947775196592008915016896290643581467495222992",
     "0.0769798105202947775196592008915016896290643581467495324792", nullptr},
    {17, 2000, 200, 200,
     "0.0588271246021194036767367088849109584242431438294286088658355576978825563",
     "0.0588271246021194036767367088849109584242431438294286088658358505456589114", nullptr},
    {19, 2000, 200, 200,
     "0.0526324829734675179643555340250633283774469991562117016273662733238280360295",
     "0.0526324829734675179643555340250633283774469991562117016273665680982357656219", nullptr},
    {23, 2000, 200, 200,
     "0.0434783178894840833442936676959388965942544846621537400365341488199880437161",
     "0.0434783178894840833442936676959388965942544846621537400365344464424578523589", nullptr},
    {29, 2000, 200, 200,
     "0.0344827595199070388388844049792239641953873954627365728107837569520705630160",
     "0.0344827595199070388388844049792239641953873954627365728107840573734977701028", nullptr},
    {31, 2000, 200, 200,
     "0.0322580647414500545950163257009657078579131023779285736837851195575316015814",
     "0.0322580647414500545950163257009657078579131023779285736837854206711740787331", nullptr},
    {37, 2000, 200, 200,
     "0.0270270270305666835231340923503436156463771224864202885139864189587084207034",
     "0.0270270270305666835231340923503436156463771224864202885139867216999922085428", nullptr},
    {41, 2000, 200, 200,
     "0.0526324829734675179643555340250633283774469991562117016273662733238280360295",
     "0.0526324829734675179643555340250633283774469991562117016273665680982357656219",
     "reference digits repeat the q=19 row"},
    {43, 2000, 200, 200,
     "0.0243902439026608523841187301974189252492456339087527260100490728868251728131",
     "0.0243902439026608523841187301974189252492456339087527260100493764485460440884",
     "reference digits belong to the q=41 interval"},
    {47, 2000, 200, 200,
     "0.0212765957446843281878803870513876380451765585785993642707367688487106754059",
     "0.0212765957446843281878803870513876380451765585785993642707370733792455494618", nullptr},
    {53, 2000, 200, 200,
     "0.0188679245283019412562238832810092145871135099055870468782572222350689036016",
     "0.0188679245283019412562238832810092145871135099055870468782575275150636666011", nullptr},
    {59, 2000, 200, 200,
     "0.0169491525423728822085928950180309408613925856773051105788352397597828390175",
     "0.0169491525423728822085928950180309408613925856773051105788355456368049711755", nullptr},
    {61, 2000, 200, 200,
     "0.0163934426229508198854168208219767903619261302180219681216219806030511287992",
     "0.0163934426229508198854168208219767903619261302180219681216222866529828268882", nullptr},
    {67, 2000, 200, 200,
     "0.0149253731343283582122927865384419386637802338726817463136753178858896539878",
     "0.0149253731343283582122927865384419386637802338726817463136756243926122949098", nullptr},
    {71, 2000, 200, 200,
     "0.0140845070422535211269693391067176967649594829351580201486906371592417410550",
     "0.0140845070422535211269693391067176967649594829351580201486909439276005088579", nullptr},
    {73, 2000, 200, 200,
     "0.0136986301369863013699152280583923981060340353762078282187845491706626305503",
     "0.0136986301369863013699152280583923981060340353762078282187848560590872921958", nullptr},
    {79, 2000, 200, 200,
     "0.0126582278481012658227856268365541662938488265742992373710486955727305542222",
     "0.0126582278481012658227856268365541662938488265742992373710490027848771828103", nullptr},
    {83, 2000, 200, 200,
     "0.0120481927710843373493976414373571004130184548993846798041887017697123434429",
     "0.0120481927710843373493976414373571004130184548993846798041890091716718522464", nullptr},
    {89, 2000, 200, 200,
     "0.0112359550561797752808988772032116167559082693745180629757011563061883886497",
     "0.0112359550561797752808988772032116167559082693745180629757014639608762829085", nullptr},
    {97, 2000, 200, 200,
     "0.0103092783505154639175257731989992019340708096559895437616545481014641811975",
     "0.0103092783505154639175257731989992019340708096559895437616548560444882403055", nullptr},
    {101, 2000, 200, 200,
     "0.0099009900990099009900990099011853616102032207443407084385975285689705070493",
     "0.0099009900990099009900990099011853616102032207443407084385978366390337675019", nullptr},
};

} // namespace

std::span<const ReferenceRow> reference_rows() {
    return kRows;
}

const ReferenceRow* find_reference_row(std::uint64_t q, std::size_t primes,
                                       std::uint64_t a_cutoff, std::uint64_t s_cutoff) {
    for (const ReferenceRow& row : kRows) {
        if (row.q == q && row.primes == primes && row.a_cutoff == a_cutoff &&
            row.s_cutoff == s_cutoff) {
            return &row;
        }
    }
    return nullptr;
}

} // namespace towerdensity
