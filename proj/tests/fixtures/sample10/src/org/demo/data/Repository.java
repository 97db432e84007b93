package org.demo.data;

import java.util.Map;

/** Stores records in a database table inside a transaction. */
public class Repository {
    private final Database database;
    private final String tableName;

    public Repository(Database database, String tableName) {
        this.database = database;
        this.tableName = tableName;
    }

    public void save(String key, String record) {
        database.begin();
        Map<String, String> table = database.table(tableName);
        table.put(key, record);
        database.commit();
    }

    public String find(String key) {
        return database.table(tableName).get(key);
    }

    public void delete(String key) {
        database.begin();
        database.table(tableName).remove(key);
        database.commit();
    }
}
