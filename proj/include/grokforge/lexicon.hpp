#pragma once

// Curated word lists and the built-in seed corpora used by the template
// backend.

#include <array>
#include <string_view>

namespace grokforge::lexicon {

struct SeedLocation {
    std::string_view name;
    std::string_view city;
    std::string_view country;
    std::string_view description;  // "<adjective> <kind>"
};

inline constexpr std::array<std::string_view, 5> kDefaultCountries = {"India", "France", "United States", "Canada",
                                                                        "Russia"};

// 24 real landmarks per default country.
inline constexpr std::array<SeedLocation, 120> kSeedLocations = {{
    {"Louvre Museum", "Paris", "France", "world-famous art museum"},
    {"Rocher des Doms", "Avignon", "France", "terraced hilltop garden"},
    {"Eiffel Tower", "Paris", "France", "wrought-iron lattice tower"},
    {"Palace of Versailles", "Versailles", "France", "former royal residence"},
    {"Reims Cathedral", "Reims", "France", "Gothic coronation cathedral"},
    {"Pont du Gard", "Vers-Pont-du-Gard", "France", "ancient Roman aqueduct bridge"},
    {"Place Stanislas", "Nancy", "France", "eighteenth-century square"},
    {"Vieux Port", "Marseille", "France", "historic harbour"},
    {"Basilica of Fourviere", "Lyon", "France", "hilltop basilica"},
    {"Cite de Carcassonne", "Carcassonne", "France", "medieval fortified city"},
    {"Promenade des Anglais", "Nice", "France", "seafront promenade"},
    {"Chateau de Chambord", "Chambord", "France", "Renaissance chateau"},
    {"Strasbourg Cathedral", "Strasbourg", "France", "Romanesque and Gothic cathedral"},
    {"Musee d'Orsay", "Paris", "France", "museum of impressionist art"},
    {"Dune of Pilat", "La Teste-de-Buch", "France", "towering coastal sand dune"},
    {"Arena of Nimes", "Nimes", "France", "Roman amphitheatre"},
    {"Place de la Bourse", "Bordeaux", "France", "riverside square"},
    {"Chateau d'If", "Marseille", "France", "island fortress"},
    {"Aiguille du Midi", "Chamonix", "France", "alpine summit station"},
    {"Amiens Cathedral", "Amiens", "France", "vast Gothic cathedral"},
    {"Palais des Papes", "Avignon", "France", "Gothic papal palace"},
    {"Capitole de Toulouse", "Toulouse", "France", "city hall and theatre"},
    {"Chartres Cathedral", "Chartres", "France", "stained-glass cathedral"},
    {"Sainte-Chapelle", "Paris", "France", "royal Gothic chapel"},

    {"Taj Mahal", "Agra", "India", "white marble mausoleum"},
    {"Gateway of India", "Mumbai", "India", "waterfront arch monument"},
    {"Qutub Minar", "Delhi", "India", "medieval brick minaret"},
    {"Hawa Mahal", "Jaipur", "India", "pink sandstone palace"},
    {"Red Fort", "Delhi", "India", "Mughal fortress"},
    {"Golden Temple", "Amritsar", "India", "gilded Sikh gurdwara"},
    {"Charminar", "Hyderabad", "India", "four-minaret monument"},
    {"Mysore Palace", "Mysore", "India", "royal palace"},
    {"Victoria Memorial", "Kolkata", "India", "marble memorial hall"},
    {"Meenakshi Temple", "Madurai", "India", "historic Hindu temple"},
    {"India Gate", "Delhi", "India", "war memorial arch"},
    {"Amber Fort", "Jaipur", "India", "hilltop fort"},
    {"Lotus Temple", "Delhi", "India", "lotus-shaped house of worship"},
    {"Konark Sun Temple", "Konark", "India", "thirteenth-century sun temple"},
    {"Howrah Bridge", "Kolkata", "India", "cantilever bridge"},
    {"Marine Drive", "Mumbai", "India", "seafront boulevard"},
    {"Ajanta Caves", "Aurangabad", "India", "rock-cut cave complex"},
    {"Sanchi Stupa", "Sanchi", "India", "ancient Buddhist monument"},
    {"Gol Gumbaz", "Vijayapura", "India", "domed mausoleum"},
    {"Humayun's Tomb", "Delhi", "India", "garden tomb"},
    {"Elephanta Caves", "Mumbai", "India", "island cave temple"},
    {"Mehrangarh Fort", "Jodhpur", "India", "clifftop fortress"},
    {"Lake Palace", "Udaipur", "India", "lakeside palace"},
    {"Brihadeeswara Temple", "Thanjavur", "India", "granite Chola temple"},

    {"Statue of Liberty", "New York", "United States", "colossal copper statue"},
    {"Golden Gate Bridge", "San Francisco", "United States", "suspension bridge"},
    {"Space Needle", "Seattle", "United States", "observation tower"},
    {"Gateway Arch", "St. Louis", "United States", "stainless steel arch"},
    {"Lincoln Memorial", "Washington", "United States", "national memorial"},
    {"Alamo Mission", "San Antonio", "United States", "historic mission"},
    {"Griffith Observatory", "Los Angeles", "United States", "public observatory"},
    {"Willis Tower", "Chicago", "United States", "skyscraper"},
    {"Empire State Building", "New York", "United States", "Art Deco skyscraper"},
    {"Independence Hall", "Philadelphia", "United States", "historic assembly hall"},
    {"French Quarter", "New Orleans", "United States", "historic district"},
    {"Pike Place Market", "Seattle", "United States", "public market"},
    {"Hollywood Sign", "Los Angeles", "United States", "hillside landmark sign"},
    {"Faneuil Hall", "Boston", "United States", "marketplace and meeting hall"},
    {"Art Institute of Chicago", "Chicago", "United States", "world-famous art museum"},
    {"Alcatraz Island", "San Francisco", "United States", "former island prison"},
    {"Smithsonian Castle", "Washington", "United States", "museum administration building"},
    {"Biltmore Estate", "Asheville", "United States", "Gilded Age mansion"},
    {"Graceland", "Memphis", "United States", "historic mansion"},
    {"Space Center Houston", "Houston", "United States", "space exploration museum"},
    {"Freedom Trail", "Boston", "United States", "historic walking trail"},
    {"Central Park", "New York", "United States", "urban park"},
    {"Las Vegas Strip", "Las Vegas", "United States", "resort boulevard"},
    {"Mount Rushmore", "Keystone", "United States", "mountain sculpture memorial"},

    {"CN Tower", "Toronto", "Canada", "concrete communications tower"},
    {"Chateau Frontenac", "Quebec City", "Canada", "grand railway hotel"},
    {"Stanley Park", "Vancouver", "Canada", "urban park"},
    {"Parliament Hill", "Ottawa", "Canada", "seat of government"},
    {"Notre-Dame Basilica", "Montreal", "Canada", "Gothic Revival basilica"},
    {"Butchart Gardens", "Victoria", "Canada", "floral display garden"},
    {"Peggy's Cove", "Halifax", "Canada", "fishing village and lighthouse"},
    {"Capilano Suspension Bridge", "North Vancouver", "Canada", "suspension footbridge"},
    {"Royal Ontario Museum", "Toronto", "Canada", "museum of art and natural history"},
    {"Calgary Tower", "Calgary", "Canada", "observation tower"},
    {"West Edmonton Mall", "Edmonton", "Canada", "shopping centre"},
    {"Halifax Citadel", "Halifax", "Canada", "star-shaped fort"},
    {"Casa Loma", "Toronto", "Canada", "Gothic Revival castle"},
    {"Rideau Canal", "Ottawa", "Canada", "historic canal"},
    {"The Forks", "Winnipeg", "Canada", "riverside meeting place"},
    {"Granville Island", "Vancouver", "Canada", "arts and market district"},
    {"Mount Royal Park", "Montreal", "Canada", "mountain park"},
    {"Fortifications of Quebec", "Quebec City", "Canada", "historic city walls"},
    {"Lake Louise", "Banff", "Canada", "glacial lake"},
    {"Signal Hill", "St. John's", "Canada", "historic hilltop site"},
    {"Canadian Museum for Human Rights", "Winnipeg", "Canada", "national museum"},
    {"Olympic Stadium", "Montreal", "Canada", "multi-purpose stadium"},
    {"Royal BC Museum", "Victoria", "Canada", "provincial museum"},
    {"Distillery District", "Toronto", "Canada", "heritage district"},

    {"Red Square", "Moscow", "Russia", "historic city square"},
    {"Hermitage Museum", "Saint Petersburg", "Russia", "world-famous art museum"},
    {"Saint Basil's Cathedral", "Moscow", "Russia", "onion-domed cathedral"},
    {"Peterhof Palace", "Saint Petersburg", "Russia", "palace and fountain park"},
    {"Kazan Kremlin", "Kazan", "Russia", "historic citadel"},
    {"Bolshoi Theatre", "Moscow", "Russia", "opera and ballet theatre"},
    {"Listvyanka Pier", "Irkutsk", "Russia", "lakeside pier"},
    {"Mamayev Kurgan", "Volgograd", "Russia", "memorial complex"},
    {"Church of the Savior on Blood", "Saint Petersburg", "Russia", "ornate memorial church"},
    {"Kizhi Pogost", "Petrozavodsk", "Russia", "wooden church ensemble"},
    {"Catherine Palace", "Pushkin", "Russia", "Rococo palace"},
    {"Tretyakov Gallery", "Moscow", "Russia", "national art gallery"},
    {"Novodevichy Convent", "Moscow", "Russia", "fortified convent"},
    {"Peter and Paul Fortress", "Saint Petersburg", "Russia", "island citadel"},
    {"Nizhny Novgorod Kremlin", "Nizhny Novgorod", "Russia", "red-brick fortress"},
    {"Golden Gate of Vladimir", "Vladimir", "Russia", "medieval city gate"},
    {"Trinity Lavra of St. Sergius", "Sergiev Posad", "Russia", "monastery complex"},
    {"Rostov Kremlin", "Rostov", "Russia", "walled bishop's court"},
    {"Konigsberg Cathedral", "Kaliningrad", "Russia", "Brick Gothic cathedral"},
    {"Russky Bridge", "Vladivostok", "Russia", "cable-stayed bridge"},
    {"Mount Elbrus", "Terskol", "Russia", "dormant volcano"},
    {"Church on the Blood", "Yekaterinburg", "Russia", "memorial church"},
    {"Sochi Olympic Park", "Sochi", "Russia", "Olympic venue cluster"},
    {"Solovetsky Monastery", "Solovetsky", "Russia", "island monastery"},
}};

struct CountryCities {
    std::string_view country;
    std::array<std::string_view, 15> cities;
};

inline constexpr std::array<CountryCities, 5> kCities = {{
    {"France",
     {"Paris", "Lyon", "Marseille", "Toulouse", "Nice", "Nantes", "Strasbourg", "Montpellier", "Bordeaux", "Lille",
      "Rennes", "Reims", "Dijon", "Grenoble", "Angers"}},
    {"India",
     {"Mumbai", "Delhi", "Bengaluru", "Chennai", "Kolkata", "Hyderabad", "Pune", "Ahmedabad", "Jaipur", "Lucknow",
      "Kochi", "Indore", "Bhopal", "Nagpur", "Surat"}},
    {"United States",
     {"Boston", "Denver", "Austin", "Portland", "Atlanta", "Phoenix", "Seattle", "Chicago", "Nashville", "Detroit",
      "Miami", "Dallas", "Baltimore", "Minneapolis", "Pittsburgh"}},
    {"Canada",
     {"Toronto", "Montreal", "Vancouver", "Calgary", "Ottawa", "Edmonton", "Winnipeg", "Halifax", "Victoria", "Regina",
      "Saskatoon", "Kingston", "Hamilton", "Sherbrooke", "Kelowna"}},
    {"Russia",
     {"Moscow", "Kazan", "Novosibirsk", "Yekaterinburg", "Samara", "Omsk", "Perm", "Ufa", "Tomsk", "Irkutsk", "Sochi",
      "Yaroslavl", "Tula", "Murmansk", "Khabarovsk"}},
}};

// Generic city names for countries outside the curated table.
inline constexpr std::array<std::string_view, 15> kGenericCities = {
    "Northgate", "Riverside", "Highfield", "Eastbrook", "Westmere", "Southport", "Oakridge", "Lakeview",
    "Stonebridge", "Fairhaven", "Redcliff", "Greenwood", "Silverton", "Marlow", "Ashford"};

struct LandmarkKind {
    std::string_view suffix;  // appended to the city name in the label
    std::string_view noun;    // used in paragraphs
};

inline constexpr std::array<LandmarkKind, 15> kLandmarkKinds = {{
    {"Cathedral", "cathedral"},
    {"Art Museum", "art museum"},
    {"Botanical Garden", "botanical garden"},
    {"Central Library", "public library"},
    {"Old Town Square", "historic square"},
    {"Railway Station", "railway station"},
    {"City Hall", "city hall"},
    {"Opera House", "opera house"},
    {"History Museum", "history museum"},
    {"Memorial Park", "memorial park"},
    {"Observation Tower", "observation tower"},
    {"Riverside Promenade", "riverside promenade"},
    {"Science Center", "science center"},
    {"Central Market", "covered market"},
    {"Zoo", "zoological park"},
}};

inline constexpr std::array<std::string_view, 6> kAdjectives = {"world-famous", "well-known", "historic",
                                                                 "popular",      "celebrated", "much-visited"};
inline constexpr std::array<std::string_view, 9> kCenturies = {"twelfth",    "thirteenth", "fourteenth",
                                                                "fifteenth",  "sixteenth",  "seventeenth",
                                                                "eighteenth", "nineteenth", "twentieth"};
inline constexpr std::array<std::string_view, 6> kFeatures = {
    "its striking facade", "its landscaped grounds", "its panoramic views",
    "its rich collections", "its seasonal festivals", "its ornate interiors"};
inline constexpr std::array<std::string_view, 3> kVisitorCounts = {"thousands of", "hundreds of thousands of",
                                                                   "millions of"};

// Names for synthetic people, places and works.
inline constexpr std::array<std::string_view, 32> kFirstNames = {
    "Alma",   "Bruno",  "Clara",  "Dmitri", "Elena",  "Felix",  "Greta",  "Hugo",   "Ines",   "Jonas",  "Katya",
    "Lionel", "Mira",   "Nils",   "Odile",  "Pavel",  "Quentin", "Rosa",  "Stefan", "Tamsin", "Ugo",    "Vera",
    "Walter", "Ximena", "Yusuf",  "Zora",   "Anton",  "Beatrix", "Cyril", "Delia",  "Emil",   "Freya"};
inline constexpr std::array<std::string_view, 32> kLastNames = {
    "Whitcombe", "Ardent",   "Beaumont", "Castell",  "Dorrance", "Ellery",   "Fairbairn", "Gallant",
    "Hartwell",  "Ingram",   "Jessop",   "Kestrel",  "Lindqvist", "Marchetti", "Norwood",  "Oakes",
    "Penrose",   "Quill",    "Ravensworth", "Sallow", "Thorne",   "Umber",    "Varga",     "Wexford",
    "Yardley",   "Zeller",   "Ashdown",  "Bramwell", "Crowley",  "Dunmore",  "Everly",    "Fenwick"};
inline constexpr std::array<std::string_view, 20> kTitleAdjectives = {
    "Silent", "Crimson", "Distant", "Hidden", "Golden", "Broken", "Endless", "Frozen", "Burning", "Quiet",
    "Lost",   "Iron",    "Velvet",  "Hollow", "Bright", "Last",   "Wild",    "Glass",  "Northern", "Secret"};
inline constexpr std::array<std::string_view, 20> kTitleNouns = {
    "Harbor", "Garden", "Frontier", "Orchard", "Lantern", "Citadel", "River", "Voyage", "Meadow", "Signal",
    "Empire", "Bridge", "Horizon",  "Winter",  "Archive", "Carnival", "Tide", "Summit", "Crossing", "Echo"};
inline constexpr std::array<std::string_view, 12> kPlacePrefixes = {"Port", "New", "East", "West", "North", "South",
                                                                    "Lake", "Fort", "Mount", "Saint", "Upper", "Old"};
inline constexpr std::array<std::string_view, 16> kPlaceRoots = {
    "Alder", "Brook", "Haven", "Marsh", "Crest", "Vale", "Ford", "Thorn",
    "Wick",  "Moor",  "Glen",  "Ridge", "Holm", "Stead", "Fell", "Combe"};

struct WorldCity {
    std::string_view city;
    std::string_view country;
};

inline constexpr std::array<WorldCity, 15> kWorldCities = {{
    {"London", "United Kingdom"},  {"Manchester", "United Kingdom"}, {"Dublin", "Ireland"},
    {"Cork", "Ireland"},           {"Kapuskasing", "Canada"},        {"Toronto", "Canada"},
    {"Lyon", "France"},            {"Bordeaux", "France"},           {"Turin", "Italy"},
    {"Naples", "Italy"},           {"Seville", "Spain"},             {"Valencia", "Spain"},
    {"Boston", "United States"},   {"Denver", "United States"},      {"Hamburg", "Germany"},
}};

inline constexpr std::array<std::string_view, 6> kCausesOfDeath = {"heart attack", "pneumonia", "tuberculosis",
                                                                   "stroke",       "cancer",    "influenza"};
inline constexpr std::array<std::string_view, 5> kUniversities = {
    "University of Northgate", "Royal College of Arts", "Saint Ambrose University", "Technical Institute of Vale",
    "Conservatory of Music"};

}  // namespace grokforge::lexicon
